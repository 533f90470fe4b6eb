#ifndef ENSEMBLELAB_JSON_IO_HPP
#define ENSEMBLELAB_JSON_IO_HPP

#include <optional>

#include <json.hpp>

#include "ensemblelab/maxent.hpp"
#include "ensemblelab/types.hpp"

namespace ensemblelab {

// Documented schemas:
//   spectrum / macrostate: {"d": int, "n": int, "eigenvalues": [[...]],
//                           "values": [...]}  (values optional)
//   state:                 {"p": [...]}
//   fit result:            {"beta": [...], "p": [...], "residual": r,
//                           "iterations": k}
// Eigenvalues and probability vectors are written in the level order they
// were supplied in.

nlohmann::json observables_to_json(const ObservableSet& obs);
ObservableSet observables_from_json(const nlohmann::json& j);

nlohmann::json macrostate_to_json(const Macrostate& m);

struct SpectrumFile {
  ObservableSet obs;
  std::optional<Vector> values;  // present when the file carries a macrostate
};

SpectrumFile spectrum_from_json(const nlohmann::json& j);

nlohmann::json state_to_json(const DiagonalState& state);
DiagonalState state_from_json(const nlohmann::json& j);

nlohmann::json solution_to_json(const GibbsSolution& sol);
GibbsSolution solution_from_json(const nlohmann::json& j);

}  // namespace ensemblelab

#endif  // ENSEMBLELAB_JSON_IO_HPP

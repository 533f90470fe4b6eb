#include "ensemblelab/json_io.hpp"

namespace ensemblelab {

namespace {

Vector vector_from_json(const nlohmann::json& j, const char* field) {
  if (!j.is_array())
    throw InvalidState(std::string(field) + " must be an array");
  Vector v(j.size());
  for (std::size_t i = 0; i < j.size(); ++i) {
    if (!j[i].is_number())
      throw InvalidState(std::string(field) + " must hold numbers");
    v[i] = j[i].get<double>();
  }
  return v;
}

nlohmann::json vector_to_json(VectorRef v) {
  nlohmann::json j = nlohmann::json::array();
  for (int i = 0; i < v.size(); ++i) j.push_back(v[i]);
  return j;
}

}  // namespace

nlohmann::json observables_to_json(const ObservableSet& obs) {
  nlohmann::json j;
  j["d"] = obs.levels();
  j["n"] = obs.observables();
  const Matrix original = obs.chargesOriginalOrder();
  nlohmann::json rows = nlohmann::json::array();
  for (int r = 0; r < original.rows(); ++r)
    rows.push_back(vector_to_json(original.row(r).transpose()));
  j["eigenvalues"] = rows;
  return j;
}

ObservableSet observables_from_json(const nlohmann::json& j) {
  if (!j.contains("d") || !j.contains("n") || !j.contains("eigenvalues"))
    throw InvalidState("spectrum requires fields d, n, eigenvalues");
  const int d = j.at("d").get<int>();
  const int n = j.at("n").get<int>();
  const auto& rows = j.at("eigenvalues");
  if (!rows.is_array() || static_cast<int>(rows.size()) != n)
    throw InvalidState("eigenvalues must hold n rows");
  Matrix charges(n, d);
  for (int r = 0; r < n; ++r) {
    const Vector row = vector_from_json(rows[r], "eigenvalues row");
    if (row.size() != d) throw InvalidState("eigenvalue row length != d");
    charges.row(r) = row.transpose();
  }
  return ObservableSet(std::move(charges));
}

nlohmann::json macrostate_to_json(const Macrostate& m) {
  nlohmann::json j = observables_to_json(m.observables());
  j["values"] = vector_to_json(m.values());
  return j;
}

SpectrumFile spectrum_from_json(const nlohmann::json& j) {
  SpectrumFile f{observables_from_json(j), std::nullopt};
  if (j.contains("values"))
    f.values = vector_from_json(j.at("values"), "values");
  return f;
}

nlohmann::json state_to_json(const DiagonalState& state) {
  nlohmann::json j;
  j["p"] = vector_to_json(state.p());
  return j;
}

DiagonalState state_from_json(const nlohmann::json& j) {
  if (!j.contains("p")) throw InvalidState("state requires field p");
  return DiagonalState(vector_from_json(j.at("p"), "p"));
}

nlohmann::json solution_to_json(const GibbsSolution& sol) {
  nlohmann::json j;
  j["beta"] = vector_to_json(sol.beta);
  j["p"] = vector_to_json(sol.state.p());
  j["residual"] = sol.residual;
  j["iterations"] = sol.iterations;
  return j;
}

GibbsSolution solution_from_json(const nlohmann::json& j) {
  if (!j.contains("beta") || !j.contains("p") || !j.contains("residual") ||
      !j.contains("iterations"))
    throw InvalidState("fit result requires beta, p, residual, iterations");
  GibbsSolution sol{vector_from_json(j.at("beta"), "beta"),
                    DiagonalState(vector_from_json(j.at("p"), "p")),
                    j.at("residual").get<double>(),
                    j.at("iterations").get<int>(), false};
  return sol;
}

}  // namespace ensemblelab

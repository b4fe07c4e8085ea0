#include "qce/io.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>

namespace qce {

namespace {

const json& field(const json& j, const char* key) {
  if (!j.is_object() || !j.contains(key)) throw DomainError(std::string("missing field \"") + key + "\"");
  return j.at(key);
}

std::size_t count_of(const json& j, const char* key) {
  const json& v = field(j, key);
  if (!v.is_number_integer() || v.get<long long>() < 0) throw DomainError(std::string("field \"") + key + "\" must be a count");
  return v.get<std::size_t>();
}

Dims dims_of(const json& j, const char* key) {
  const json& v = field(j, key);
  if (!v.is_array() || v.empty()) throw DomainError(std::string("field \"") + key + "\" must be a nonempty array");
  Dims d;
  for (const auto& x : v) {
    if (!x.is_number_integer() || x.get<long long>() < 1) throw DomainError("dimensions must be positive integers");
    d.push_back(x.get<std::size_t>());
  }
  return d;
}

double real_of(const json& v) {
  if (!v.is_number()) throw DomainError("expected a number");
  return v.get<double>();
}

}  // namespace

double round12(double v) {
  if (!std::isfinite(v)) return v;
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.12g", v);
  const double r = std::strtod(buf, nullptr);
  return r == 0.0 ? 0.0 : r;
}

json number(double v) {
  if (!std::isfinite(v)) return nullptr;
  return round12(v);
}

std::string read_text_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw DomainError("cannot open " + path);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

json read_json_file(const std::string& path) {
  try {
    return json::parse(read_text_file(path));
  } catch (const json::exception& e) {
    throw DomainError("malformed JSON in " + path + ": " + e.what());
  }
}

json matrix_to_json(const Matrix& m) {
  json data = json::array();
  for (Eigen::Index i = 0; i < m.rows(); ++i)
    for (Eigen::Index j = 0; j < m.cols(); ++j) data.push_back({number(m(i, j).real()), number(m(i, j).imag())});
  return {{"rows", m.rows()}, {"cols", m.cols()}, {"data", data}};
}

Matrix matrix_from_json(const json& j) {
  const std::size_t rows = count_of(j, "rows"), cols = count_of(j, "cols");
  const json& data = field(j, "data");
  if (!data.is_array() || data.size() != rows * cols) throw DomainError("matrix data length does not equal rows*cols");
  Matrix m(static_cast<Eigen::Index>(rows), static_cast<Eigen::Index>(cols));
  for (std::size_t k = 0; k < data.size(); ++k) {
    const json& e = data[k];
    cplx z;
    if (e.is_number())
      z = real_of(e);
    else if (e.is_array() && e.size() == 2)
      z = cplx(real_of(e[0]), real_of(e[1]));
    else
      throw DomainError("matrix entries must be [re, im] pairs");
    m(static_cast<Eigen::Index>(k / cols), static_cast<Eigen::Index>(k % cols)) = z;
  }
  require_finite(m, "matrix");
  return m;
}

json real_matrix_to_json(const RealMatrix& m) {
  json rows = json::array();
  for (Eigen::Index i = 0; i < m.rows(); ++i) {
    json row = json::array();
    for (Eigen::Index j = 0; j < m.cols(); ++j) row.push_back(number(m(i, j)));
    rows.push_back(row);
  }
  return rows;
}

RealMatrix real_matrix_from_json(const json& j) {
  if (!j.is_array() || j.empty() || !j[0].is_array() || j[0].empty()) throw DomainError("expected a nonempty nested array");
  const auto rows = static_cast<Eigen::Index>(j.size()), cols = static_cast<Eigen::Index>(j[0].size());
  RealMatrix m(rows, cols);
  for (Eigen::Index i = 0; i < rows; ++i) {
    if (!j[i].is_array() || static_cast<Eigen::Index>(j[i].size()) != cols) throw DomainError("ragged matrix rows");
    for (Eigen::Index k = 0; k < cols; ++k) m(i, k) = real_of(j[i][k]);
  }
  return m;
}

json density_to_json(const DensityOperator& rho) {
  json j = matrix_to_json(rho.matrix());
  j["dims"] = rho.dims();
  return j;
}

DensityOperator density_from_json(const json& j) { return DensityOperator(dims_of(j, "dims"), matrix_from_json(j)); }

json channel_to_json(const QuantumChannel& ch) {
  json kraus = json::array();
  for (const auto& k : ch.kraus()) kraus.push_back(matrix_to_json(k));
  return {{"in_dims", ch.in_dims()}, {"out_dims", ch.out_dims()}, {"kraus", kraus}};
}

QuantumChannel channel_from_json(const json& j) {
  const Dims in = dims_of(j, "in_dims"), out = dims_of(j, "out_dims");
  if (j.contains("kraus")) {
    const json& ks = j.at("kraus");
    if (!ks.is_array() || ks.empty()) throw DomainError("\"kraus\" must be a nonempty array");
    std::vector<Matrix> kraus;
    for (const auto& k : ks) kraus.push_back(matrix_from_json(k));
    return QuantumChannel(in, out, std::move(kraus));
  }
  if (j.contains("choi")) return from_choi(matrix_from_json(j.at("choi")), in, out);
  throw DomainError("channel needs \"kraus\" or \"choi\"");
}

json state_game_to_json(const StateGameSpec& g) { return {{"t", real_matrix_to_json(g.t.t())}, {"p_adv", number(g.p_adv)}}; }

StateGameSpec state_game_from_json(const json& j) {
  const double p = j.contains("p_adv") ? real_of(j.at("p_adv")) : 0.0;
  if (!(p >= 0.0 && p <= 1.0)) throw DomainError("p_adv must lie in [0, 1]");
  return {HostMatrix(real_matrix_from_json(field(j, "t")), true), p};
}

json channel_game_to_json(const ChannelGameSpec& g) {
  json entries = json::array();
  for (const auto& e : g.entries()) entries.push_back({{"p", number(e.p)}, {"state", density_to_json(e.state)}});
  return {{"entries", entries}};
}

ChannelGameSpec channel_game_from_json(const json& j) {
  const json& es = field(j, "entries");
  if (!es.is_array()) throw DomainError("\"entries\" must be an array");
  std::vector<ChannelGameEntry> entries;
  for (const auto& e : es) entries.push_back({real_of(field(e, "p")), density_from_json(field(e, "state"))});
  return ChannelGameSpec(std::move(entries));
}

ClassicalJoint joint_from_csv(const std::string& text) {
  std::vector<std::vector<double>> rows;
  std::istringstream in(text);
  std::string line;
  while (std::getline(in, line)) {
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.find_first_not_of(" \t") == std::string::npos || line[line.find_first_not_of(" \t")] == '#') continue;
    std::vector<double> row;
    std::istringstream cells(line);
    std::string cell;
    while (std::getline(cells, cell, ',')) {
      std::size_t used = 0;
      double v;
      try {
        v = std::stod(cell, &used);
      } catch (const std::exception&) {
        throw DomainError("CSV cell is not a number: \"" + cell + "\"");
      }
      if (cell.find_first_not_of(" \t", used) != std::string::npos) throw DomainError("CSV cell is not a number: \"" + cell + "\"");
      row.push_back(v);
    }
    if (!rows.empty() && row.size() != rows[0].size()) throw DomainError("CSV rows have different lengths");
    rows.push_back(std::move(row));
  }
  if (rows.empty() || rows[0].empty()) throw DomainError("CSV holds no data");
  RealMatrix p(static_cast<Eigen::Index>(rows.size()), static_cast<Eigen::Index>(rows[0].size()));
  for (std::size_t i = 0; i < rows.size(); ++i)
    for (std::size_t k = 0; k < rows[i].size(); ++k) p(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(k)) = rows[i][k];
  return ClassicalJoint(p);
}

std::string joint_to_csv(const ClassicalJoint& p) {
  std::ostringstream out;
  out.precision(12);
  for (Eigen::Index i = 0; i < p.p().rows(); ++i) {
    for (Eigen::Index k = 0; k < p.p().cols(); ++k) out << (k ? "," : "") << round12(p.p()(i, k));
    out << "\n";
  }
  return out.str();
}

json verdict_to_json(const CuscVerdict& v) {
  json j{{"conditionally_unital", v.conditionally_unital},
         {"semicausal_choi", v.semicausal_choi},
         {"semicausal_operational", v.semicausal_operational ? json(*v.semicausal_operational) : json(nullptr)},
         {"max_violation", number(v.max_violation)},
         {"unital_violation", number(v.unital_violation)},
         {"semicausal_violation", number(v.semicausal_violation)}};
  if (v.operational_violation) j["operational_violation"] = number(*v.operational_violation);
  return j;
}

json report_to_json(const RewardReport& r) {
  json j{{"value", number(r.value)}, {"restarts_used", r.restarts_used}, {"certified", r.certified}};
  if (r.strategy) j["strategy"] = {{"bob_basis", matrix_to_json(r.strategy->bob_basis)}, {"f", r.strategy->f}};
  if (r.adversary) j["adversary"] = {{"basis", matrix_to_json(r.adversary->basis)}, {"partition", r.adversary->partition}};
  if (r.preprocessing) j["preprocessing"] = channel_to_json(*r.preprocessing);
  return j;
}

json sim_to_json(const SimResult& s) {
  return {{"wins", s.wins},
          {"rounds", s.rounds},
          {"win_rate", number(s.win_rate)},
          {"std_err", number(s.std_err)},
          {"seed", s.seed}};
}

SimResult sim_from_json(const json& j) {
  SimResult s;
  s.wins = field(j, "wins").get<std::uint64_t>();
  s.rounds = field(j, "rounds").get<std::uint64_t>();
  s.win_rate = real_of(field(j, "win_rate"));
  s.std_err = real_of(field(j, "std_err"));
  s.seed = field(j, "seed").get<std::uint64_t>();
  return s;
}

json classical_verdict_to_json(const ClassicalVerdict& v) {
  json j{{"feasible", v.majorizes}, {"residual", number(v.residual)}, {"infeasibility", number(v.infeasibility)}};
  if (v.certificate) {
    json ds = json::array();
    for (const auto& d : v.certificate->d) ds.push_back(real_matrix_to_json(d));
    j["certificate"] = {{"t", real_matrix_to_json(v.certificate->t)}, {"d", ds}};
  }
  if (v.falsifier) j["falsifier"] = {{"t", real_matrix_to_json(v.falsifier->t())}, {"gap", number(v.falsifier_gap)}};
  return j;
}

}  // namespace qce

#include "gaussep_cli/io.hpp"

#include <cmath>
#include <fstream>
#include <sstream>

#include <fmt/format.h>

#include "gaussep/errors.hpp"

#ifndef GAUSSEP_VERSION
#define GAUSSEP_VERSION "0.0.0"
#endif

namespace gaussep::cli {

namespace {

std::string_view base_key(std::string_view field) {
  if (auto dot = field.rfind('.'); dot != std::string_view::npos) field = field.substr(dot + 1);
  if (auto br = field.find('['); br != std::string_view::npos) field = field.substr(0, br);
  return field;
}

std::pair<int, int> line_col(std::string_view text, std::size_t byte) {
  int line = 1;
  int col = 1;
  for (std::size_t i = 0; i < byte && i < text.size(); ++i) {
    if (text[i] == '\n') {
      ++line;
      col = 1;
    } else {
      ++col;
    }
  }
  return {line, col};
}

}  // namespace

// ---------------------------------------------------------------------------
// Files

std::string read_text_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw InputError(fmt::format("{}: cannot open for reading", path.string()));
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void write_text_file(const std::filesystem::path& path, std::string_view text) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw InputError(fmt::format("{}: cannot open for writing", path.string()));
  out.write(text.data(), static_cast<std::streamsize>(text.size()));
  out.flush();
  if (!out) throw InputError(fmt::format("{}: write failed", path.string()));
}

std::string dump(const Json& j) { return j.dump(2) + "\n"; }

Json matrix_to_json(const Matrix& m) {
  Json rows = Json::array();
  for (Index i = 0; i < m.rows(); ++i) {
    Json row = Json::array();
    for (Index k = 0; k < m.cols(); ++k) row.push_back(m(i, k));
    rows.push_back(std::move(row));
  }
  return rows;
}

Json vector_to_json(const Vector& v) {
  Json out = Json::array();
  for (Index i = 0; i < v.size(); ++i) out.push_back(v(i));
  return out;
}

// ---------------------------------------------------------------------------
// Document

Document::Document(std::string text, std::string origin) : text_(std::move(text)), origin_(std::move(origin)) {
  try {
    root_ = Json::parse(text_);
  } catch (const Json::parse_error& e) {
    const auto [line, col] = line_col(text_, e.byte == 0 ? 0 : e.byte - 1);
    throw InputError(fmt::format("{}:{}:{}: malformed JSON: {}", origin_, line, col, e.what()));
  }
}

int Document::line_of(std::string_view field) const {
  const std::string needle = fmt::format("\"{}\"", base_key(field));
  const auto pos = text_.find(needle);
  if (pos == std::string::npos) return 0;
  return line_col(text_, pos).first;
}

void Document::fail(std::string_view field, std::string_view what) const {
  const int line = line_of(field);
  if (line > 0) throw InputError(fmt::format("{}:{}: field '{}': {}", origin_, line, field, what));
  throw InputError(fmt::format("{}: field '{}': {}", origin_, field, what));
}

const Json& Document::require(const Json& obj, std::string_view field) const {
  const std::string key(base_key(field));
  if (!obj.is_object() || !obj.contains(key)) fail(field, "missing");
  return obj.at(key);
}

double Document::number(const Json& j, std::string_view field) const {
  if (!j.is_number()) fail(field, "expected a number");
  const double v = j.get<double>();
  if (!std::isfinite(v)) fail(field, "not finite");
  return v;
}

int Document::integer(const Json& j, std::string_view field) const {
  if (!j.is_number_integer()) fail(field, "expected an integer");
  return j.get<int>();
}

Matrix Document::matrix(const Json& j, std::string_view field, std::optional<Index> rows,
                        std::optional<Index> cols) const {
  if (!j.is_array() || j.empty()) fail(field, "expected a non-empty array of rows");
  const auto r = static_cast<Index>(j.size());
  if (rows && r != *rows) fail(field, fmt::format("expected {} rows, got {}", *rows, r));
  if (!j[0].is_array()) fail(fmt::format("{}[0]", field), "expected an array");
  const auto c = static_cast<Index>(j[0].size());
  if (cols && c != *cols) fail(field, fmt::format("expected {} columns, got {}", *cols, c));
  Matrix m(r, c);
  for (Index i = 0; i < r; ++i) {
    const Json& row = j[static_cast<std::size_t>(i)];
    if (!row.is_array() || static_cast<Index>(row.size()) != c) {
      fail(fmt::format("{}[{}]", field, i), fmt::format("expected an array of {} numbers", c));
    }
    for (Index k = 0; k < c; ++k) {
      m(i, k) = number(row[static_cast<std::size_t>(k)], fmt::format("{}[{}][{}]", field, i, k));
    }
  }
  return m;
}

Vector Document::vector(const Json& j, std::string_view field, std::optional<Index> size) const {
  if (!j.is_array()) fail(field, "expected an array");
  const auto n = static_cast<Index>(j.size());
  if (size && n != *size) fail(field, fmt::format("expected {} entries, got {}", *size, n));
  Vector v(n);
  for (Index i = 0; i < n; ++i) v(i) = number(j[static_cast<std::size_t>(i)], fmt::format("{}[{}]", field, i));
  return v;
}

// ---------------------------------------------------------------------------
// State files

StateFile parse_state_file(std::string_view text, std::string_view origin) {
  const Document doc{std::string(text), std::string(origin)};
  const Json& root = doc.root();
  if (!root.is_object()) throw InputError(fmt::format("{}: expected a JSON object", origin));

  StateFile s;
  s.hbar = doc.number(doc.require(root, "hbar"), "hbar");
  if (!(s.hbar > 0.0)) doc.fail("hbar", "must be positive");
  s.n_a = doc.integer(doc.require(root, "n_A"), "n_A");
  s.n_b = doc.integer(doc.require(root, "n_B"), "n_B");
  if (s.n_a < 1) doc.fail("n_A", "must be >= 1");
  if (s.n_b < 1) doc.fail("n_B", "must be >= 1");

  const Json& ordering = doc.require(root, "ordering");
  if (!ordering.is_string() || ordering.get<std::string>() != kOrdering) {
    doc.fail("ordering", fmt::format("unsupported ordering (expected \"{}\")", kOrdering));
  }

  const Index d = 2 * (s.n_a + s.n_b);
  const Matrix sigma = doc.matrix(doc.require(root, "sigma"), "sigma", d, d);
  const double asym = (sigma - sigma.transpose()).cwiseAbs().maxCoeff();
  if (asym > kLoadSymmetryTol * std::max(1.0, sigma.cwiseAbs().maxCoeff())) {
    doc.fail("sigma", fmt::format("not symmetric (max |S - S^T| = {})", asym));
  }
  s.sigma = SymMatrix(sigma);

  if (root.contains("mean") && !root.at("mean").is_null()) {
    s.mean = doc.vector(root.at("mean"), "mean", d);
  }
  if (root.contains("label")) {
    if (!root.at("label").is_string()) doc.fail("label", "expected a string");
    s.label = root.at("label").get<std::string>();
  }
  return s;
}

StateFile load_state_file(const std::filesystem::path& path) {
  return parse_state_file(read_text_file(path), path.string());
}

Json state_to_json(const StateFile& state) {
  Json j;
  j["hbar"] = state.hbar;
  j["n_A"] = state.n_a;
  j["n_B"] = state.n_b;
  j["ordering"] = kOrdering;
  j["sigma"] = matrix_to_json(state.sigma.matrix());
  if (state.mean.size() > 0) j["mean"] = vector_to_json(state.mean);
  if (!state.label.empty()) j["label"] = state.label;
  return j;
}

// ---------------------------------------------------------------------------
// Certificates

CertificateFile parse_certificate_file(std::string_view text, std::string_view origin) {
  const Document doc{std::string(text), std::string(origin)};
  const Json* node = &doc.root();
  std::string prefix;
  if (node->is_object() && node->contains("verdict")) {
    if (!node->contains("certificate")) {
      throw InputError(fmt::format("{}: report (verdict {}) carries no certificate", origin,
                                   node->at("verdict").dump()));
    }
    node = &node->at("certificate");
    prefix = "certificate.";
  }
  if (!node->is_object()) throw InputError(fmt::format("{}: expected a JSON object", origin));
  CertificateFile c;
  c.p_a = doc.matrix(doc.require(*node, prefix + "P_A"), prefix + "P_A");
  c.p_b = doc.matrix(doc.require(*node, prefix + "P_B"), prefix + "P_B");
  if (c.p_a.rows() != c.p_a.cols()) doc.fail(prefix + "P_A", "not square");
  if (c.p_b.rows() != c.p_b.cols()) doc.fail(prefix + "P_B", "not square");
  return c;
}

CertificateFile load_certificate_file(const std::filesystem::path& path) {
  return parse_certificate_file(read_text_file(path), path.string());
}

Matrix load_matrix_file(const std::filesystem::path& path, std::string_view key) {
  const Document doc{read_text_file(path), path.string()};
  const Json& root = doc.root();
  if (root.is_array()) return doc.matrix(root, key);
  return doc.matrix(doc.require(root, key), key);
}

// ---------------------------------------------------------------------------
// Reports

Json certificate_to_json(const SeparabilityCertificate& cert) {
  Json j;
  j["P_A"] = matrix_to_json(cert.p_a.matrix());
  j["P_B"] = matrix_to_json(cert.p_b.matrix());
  j["S_A"] = matrix_to_json(cert.s_a.matrix());
  j["S_B"] = matrix_to_json(cert.s_b.matrix());
  j["slack"] = cert.slack;
  j["sigma_A"] = matrix_to_json(cert.sigma_a.matrix());
  j["sigma_B"] = matrix_to_json(cert.sigma_b.matrix());
  j["source"] = cert.source;
  return j;
}

Json report_to_json(const GaussianState& state, const CriterionReport& report, double wall_time_ms,
                    const ConfigEcho& config, std::string_view label) {
  Json j;
  j["verdict"] = std::string(verdict_name(report.verdict));
  if (!label.empty()) j["label"] = std::string(label);

  Json residuals;
  residuals["solver"] = report.solver_residual;
  if (const auto* s = std::get_if<Separable>(&report.verdict)) {
    j["certificate"] = certificate_to_json(s->certificate);
    residuals["certificate_slack"] = s->certificate.slack;
  } else if (const auto* e = std::get_if<Entangled>(&report.verdict)) {
    j["witness"] = Json{{"nu_tilde_min", e->witness.nu_tilde_min}, {"threshold", e->witness.threshold}};
  }

  Json diag;
  diag["symplectic_eigenvalues"] = vector_to_json(state.symplectic_eigenvalues());
  diag["purity"] = purity(state);
  diag["ppt_eigenvalues"] = vector_to_json(report.ppt.nu_tilde);
  diag["solver_iterations"] = report.solver_iterations;
  diag["residuals"] = residuals;
  diag["wall_time_ms"] = wall_time_ms;
  j["diagnostics"] = diag;

  j["tool_version"] = GAUSSEP_VERSION;
  Json echo;
  echo["hbar"] = Json{{"value", config.hbar}, {"source", config.hbar_source}};
  echo["tol"] = Json{{"value", config.solver.cert_tol}, {"source", config.tol_source}};
  echo["max_iter"] = Json{{"value", config.solver.max_iter}, {"source", config.max_iter_source}};
  echo["residual_tol"] = config.solver.residual_tol;
  echo["stall_window"] = config.solver.stall_window;
  echo["direct_search_fallback"] = config.solver.direct_search_fallback;
  j["config_echo"] = echo;
  return j;
}

}  // namespace gaussep::cli

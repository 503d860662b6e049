#pragma once

// JSON file formats: state-set files, partial-isometry spec files, circuit
// files and machine-readable reports. Complex numbers are [re, im] pairs and
// every document written here carries "schema": 1.

#include <cctype>
#include <cmath>
#include <cstddef>
#include <map>
#include <optional>
#include <set>
#include <sstream>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "json.hpp"
#include "qorder/error.hpp"
#include "qorder/feasibility.hpp"
#include "qorder/linalg.hpp"
#include "qorder/ordering.hpp"
#include "qorder/synthesis.hpp"

namespace qorder::io {

using Json = nlohmann::ordered_json;

inline constexpr int kSchemaVersion = 1;
// States off unit norm by at most this much are renormalized on load.
inline constexpr double kIngestNormTolerance = 1e-6;

/// Malformed input, anchored to a 1-based line of the source text.
class FileError : public Error {
 public:
  FileError(std::string source, std::size_t line, std::string pointer, const std::string& what)
      : Error("malformed", source + ":" + std::to_string(line) + ": " + what +
                               (pointer.empty() ? "" : " (at " + pointer + ")")),
        source_(std::move(source)),
        line_(line),
        pointer_(std::move(pointer)) {}

  const std::string& source() const noexcept { return source_; }
  std::size_t line() const noexcept { return line_; }
  const std::string& pointer() const noexcept { return pointer_; }

 private:
  std::string source_;
  std::size_t line_;
  std::string pointer_;
};

/// Maps JSON pointers to the line where the value starts. Built by a small
/// scanner over text that nlohmann has already accepted.
class LineIndex {
 public:
  explicit LineIndex(std::string_view text) : text_(text) {
    skip_ws();
    if (pos_ < text_.size()) value("");
  }

  /// Line of `pointer`, falling back to the nearest recorded ancestor.
  std::size_t line_of(std::string pointer) const {
    for (;;) {
      if (auto it = lines_.find(pointer); it != lines_.end()) return it->second;
      if (pointer.empty()) return 1;
      pointer.erase(pointer.rfind('/'));
    }
  }

 private:
  static std::string escape(std::string_view key) {
    std::string out;
    for (char c : key) {
      if (c == '~') out += "~0";
      else if (c == '/') out += "~1";
      else out += c;
    }
    return out;
  }

  void skip_ws() {
    while (pos_ < text_.size() && std::isspace(static_cast<unsigned char>(text_[pos_]))) {
      if (text_[pos_] == '\n') ++line_;
      ++pos_;
    }
  }

  std::string string_token() {
    std::string raw;
    ++pos_;  // opening quote
    while (pos_ < text_.size() && text_[pos_] != '"') {
      if (text_[pos_] == '\\') raw += text_[pos_++];
      raw += text_[pos_++];
    }
    ++pos_;
    return raw;
  }

  void value(const std::string& pointer) {
    lines_.emplace(pointer, line_);
    const char c = text_[pos_];
    if (c == '{') {
      ++pos_;
      skip_ws();
      while (pos_ < text_.size() && text_[pos_] != '}') {
        const std::string key = Json::parse("\"" + string_token() + "\"").get<std::string>();
        skip_ws();
        ++pos_;  // ':'
        skip_ws();
        value(pointer + "/" + escape(key));
        skip_ws();
        if (text_[pos_] == ',') ++pos_;
        skip_ws();
      }
      ++pos_;
    } else if (c == '[') {
      ++pos_;
      skip_ws();
      for (std::size_t k = 0; pos_ < text_.size() && text_[pos_] != ']'; ++k) {
        value(pointer + "/" + std::to_string(k));
        skip_ws();
        if (text_[pos_] == ',') ++pos_;
        skip_ws();
      }
      ++pos_;
    } else if (c == '"') {
      string_token();
    } else {
      while (pos_ < text_.size() && !std::isspace(static_cast<unsigned char>(text_[pos_])) &&
             text_[pos_] != ',' && text_[pos_] != ']' && text_[pos_] != '}')
        ++pos_;
    }
  }

  std::string_view text_;
  std::size_t pos_ = 0;
  std::size_t line_ = 1;
  std::map<std::string, std::size_t> lines_;
};

/// Parsed document plus enough bookkeeping to point diagnostics at lines.
class Document {
 public:
  Document(std::string text, std::string source) : source_(std::move(source)) {
    try {
      json_ = Json::parse(text);
    } catch (const nlohmann::json::parse_error& e) {
      std::size_t line = 1;
      for (std::size_t k = 0; k + 1 < e.byte && k < text.size(); ++k)
        if (text[k] == '\n') ++line;
      throw FileError(source_, line, "", "invalid JSON");
    }
    lines_.emplace(text);
  }

  const Json& root() const noexcept { return json_; }
  const std::string& source() const noexcept { return source_; }

  [[noreturn]] void fail(const std::string& pointer, const std::string& what) const {
    throw FileError(source_, lines_->line_of(pointer), pointer, what);
  }

  const Json& require(const Json& obj, const std::string& pointer, const char* key) const {
    if (!obj.is_object()) fail(pointer, "expected an object");
    auto it = obj.find(key);
    if (it == obj.end()) fail(pointer, std::string("missing field \"") + key + "\"");
    return *it;
  }

  std::size_t positive_integer(const Json& v, const std::string& pointer) const {
    if (!v.is_number_integer() || v.get<long long>() < 1) fail(pointer, "expected a positive integer");
    return v.get<std::size_t>();
  }

  double real(const Json& v, const std::string& pointer) const {
    if (!v.is_number()) fail(pointer, "expected a number");
    const double x = v.get<double>();
    if (!std::isfinite(x)) fail(pointer, "expected a finite number");
    return x;
  }

  void check_schema() const {
    if (!json_.is_object()) fail("", "top level must be an object");
    if (auto it = json_.find("schema"); it != json_.end()) {
      if (!it->is_number_integer() || it->get<int>() != kSchemaVersion) {
        fail("/schema", "unsupported schema version (expected " + std::to_string(kSchemaVersion) + ")");
      }
    }
  }

 private:
  Json json_;
  std::string source_;
  std::optional<LineIndex> lines_;
};

inline Json to_json(Complex z) { return Json::array({z.real(), z.imag()}); }

inline Json to_json(const StateVector& v) {
  Json a = Json::array();
  for (const auto& z : v.amplitudes()) a.push_back(to_json(z));
  return a;
}

inline Json to_json(const ComplexMatrix& m) {
  Json rows = Json::array();
  for (std::size_t r = 0; r < m.rows(); ++r) {
    Json row = Json::array();
    for (std::size_t c = 0; c < m.cols(); ++c) row.push_back(to_json(m(r, c)));
    rows.push_back(std::move(row));
  }
  return rows;
}

inline Json to_json(const UnitaryMatrix& u) {
  Json j;
  j["dim"] = u.dim();
  j["entries"] = to_json(u.matrix());
  return j;
}

namespace detail {

inline std::vector<Complex> read_amplitudes(const Document& doc, const Json& v,
                                            const std::string& pointer, std::size_t dim) {
  if (!v.is_array()) doc.fail(pointer, "amplitudes must be an array of [re, im] pairs");
  if (v.size() != dim) {
    doc.fail(pointer, "expected " + std::to_string(dim) + " amplitudes, found " +
                          std::to_string(v.size()));
  }
  std::vector<Complex> out;
  for (std::size_t k = 0; k < v.size(); ++k) {
    const std::string p = pointer + "/" + std::to_string(k);
    if (!v[k].is_array() || v[k].size() != 2) doc.fail(p, "amplitude must be a [re, im] pair");
    out.emplace_back(doc.real(v[k][0], p + "/0"), doc.real(v[k][1], p + "/1"));
  }
  return out;
}

/// Accepts norm errors up to kIngestNormTolerance, renormalizing (and
/// warning) above tolerance::kNorm.
inline StateVector ingest_state(const Document& doc, std::vector<Complex> amps,
                                const std::string& pointer, const std::string& what,
                                std::vector<std::string>& warnings) {
  double n = 0.0;
  for (const auto& z : amps) n += std::norm(z);
  n = std::sqrt(n);
  const double err = std::abs(n - 1.0);
  std::ostringstream norm_text;
  norm_text.precision(12);
  norm_text << n;
  if (!(err <= kIngestNormTolerance)) {
    doc.fail(pointer, what + " has norm " + norm_text.str() + ", beyond the ingest tolerance");
  }
  if (err > tolerance::kNorm) {
    warnings.push_back(doc.source() + ": " + what + " renormalized (norm was " +
                       norm_text.str() + ")");
    return StateVector::normalized(std::move(amps));
  }
  return StateVector(std::move(amps));
}

}  // namespace detail

struct StateSetFile {
  OrderedStateSet set;
  std::vector<std::string> labels;
  std::optional<Valuation> valuation;
  std::vector<std::string> warnings;
};

/// Reads {"dim": D, "states": [{"label", "amplitudes"}], "valuation"?} from
/// the object at `pointer`.
inline StateSetFile parse_state_set(const Document& doc, const Json& obj, const std::string& pointer) {
  StateSetFile out;
  const std::size_t dim = doc.positive_integer(doc.require(obj, pointer, "dim"), pointer + "/dim");
  const Json& states = doc.require(obj, pointer, "states");
  const std::string sp = pointer + "/states";
  if (!states.is_array() || states.empty()) doc.fail(sp, "states must be a nonempty array");

  std::vector<StateVector> members;
  std::set<std::string> seen;
  for (std::size_t k = 0; k < states.size(); ++k) {
    const std::string p = sp + "/" + std::to_string(k);
    const Json& label = doc.require(states[k], p, "label");
    if (!label.is_string()) doc.fail(p + "/label", "label must be a string");
    const auto name = label.get<std::string>();
    if (!seen.insert(name).second) doc.fail(p + "/label", "duplicate label \"" + name + "\"");
    auto amps = detail::read_amplitudes(doc, doc.require(states[k], p, "amplitudes"),
                                        p + "/amplitudes", dim);
    members.push_back(detail::ingest_state(doc, std::move(amps), p + "/amplitudes",
                                           "state \"" + name + "\"", out.warnings));
    out.labels.push_back(name);
  }
  out.set = OrderedStateSet(std::move(members));

  if (auto it = obj.find("valuation"); it != obj.end()) {
    const std::string vp = pointer + "/valuation";
    if (!it->is_array() || it->size() != dim) {
      doc.fail(vp, "valuation must list " + std::to_string(dim) + " numbers");
    }
    std::vector<double> values;
    for (std::size_t b = 0; b < it->size(); ++b) {
      const double v = doc.real((*it)[b], vp + "/" + std::to_string(b));
      if (v < 0.0) doc.fail(vp + "/" + std::to_string(b), "valuation entries must be nonnegative");
      values.push_back(v);
    }
    out.valuation = Valuation(std::move(values));
  }
  return out;
}

inline StateSetFile load_state_set(std::string text, std::string source) {
  Document doc(std::move(text), std::move(source));
  doc.check_schema();
  return parse_state_set(doc, doc.root(), "");
}

inline Json to_json(const OrderedStateSet& set, const std::vector<std::string>& labels = {}) {
  Json j;
  j["dim"] = set.dim();
  Json states = Json::array();
  for (std::size_t k = 0; k < set.size(); ++k) {
    Json s;
    s["label"] = k < labels.size() ? labels[k] : "psi" + std::to_string(k + 1);
    s["amplitudes"] = to_json(set.members()[k]);
    states.push_back(std::move(s));
  }
  j["states"] = std::move(states);
  return j;
}

struct SpecFile {
  PartialIsometrySpec spec;
  std::vector<std::string> labels;
  std::vector<std::string> warnings;
};

/// Reads {"dim": D, "pairs": [{"label"?, "input", "output"}]}. Inputs and
/// outputs share D; pad with an ancilla before writing the file.
inline SpecFile load_spec(std::string text, std::string source) {
  Document doc(std::move(text), std::move(source));
  doc.check_schema();
  const Json& root = doc.root();
  const std::size_t dim = doc.positive_integer(doc.require(root, "", "dim"), "/dim");
  const Json& pairs = doc.require(root, "", "pairs");
  if (!pairs.is_array() || pairs.empty()) doc.fail("/pairs", "pairs must be a nonempty array");

  std::vector<PartialIsometrySpec::Pair> rows;
  std::vector<std::string> labels;
  std::vector<std::string> warnings;
  for (std::size_t k = 0; k < pairs.size(); ++k) {
    const std::string p = "/pairs/" + std::to_string(k);
    std::string name = "pair" + std::to_string(k + 1);
    if (pairs[k].is_object() && pairs[k].contains("label")) {
      if (!pairs[k]["label"].is_string()) doc.fail(p + "/label", "label must be a string");
      name = pairs[k]["label"].get<std::string>();
    }
    auto in = detail::read_amplitudes(doc, doc.require(pairs[k], p, "input"), p + "/input", dim);
    auto out = detail::read_amplitudes(doc, doc.require(pairs[k], p, "output"), p + "/output", dim);
    rows.emplace_back(detail::ingest_state(doc, std::move(in), p + "/input", name + " input", warnings),
                      detail::ingest_state(doc, std::move(out), p + "/output", name + " output", warnings));
    labels.push_back(std::move(name));
  }
  return {PartialIsometrySpec(std::move(rows)), std::move(labels), std::move(warnings)};
}

inline Json to_json(const Violation& v) {
  Json j;
  j["indices"] = v.indices;
  j["lhs"] = to_json(v.lhs);
  j["rhs"] = to_json(v.rhs);
  j["residual"] = v.residual;
  return j;
}

inline Json to_json(const FeasibilityReport& r) {
  Json j;
  j["verdict"] = std::string(to_string(r.verdict));
  j["tolerance"] = r.tolerance;
  j["max_residual"] = r.max_residual;
  Json vs = Json::array();
  for (const auto& v : r.violations) vs.push_back(to_json(v));
  j["violations"] = std::move(vs);
  return j;
}

// Circuit files.

inline Json to_json(const ComparatorCircuit& c, const std::vector<std::string>& labels = {}) {
  Json j;
  j["schema"] = kSchemaVersion;
  j["kind"] = "comparator";
  j["alphabet"] = to_json(c.set, labels);
  j["flag_dim"] = kFlagDim;
  j["unitary"] = to_json(c.unitary);
  return j;
}

inline Json to_json(const SorterCircuit& c, const std::vector<std::string>& labels = {}) {
  Json j;
  j["schema"] = kSchemaVersion;
  j["kind"] = "sorter";
  j["alphabet"] = to_json(c.set, labels);
  j["n_registers"] = c.n_registers;
  j["flag_dim"] = kFlagDim;
  Json stages = Json::array();
  for (std::size_t s = 0; s < c.stages.size(); ++s) {
    Json st;
    st["position"] = c.stages[s].position;
    st["flag"] = s + 1;
    st["unitary"] = to_json(c.stages[s].unitary);
    stages.push_back(std::move(st));
  }
  j["stages"] = std::move(stages);
  return j;
}

/// Serialized form written by `synthesize`; one trailing newline.
inline std::string dump_circuit(const Json& circuit) { return circuit.dump(1) + "\n"; }

namespace detail {

inline UnitaryMatrix read_unitary(const Document& doc, const Json& obj, const std::string& pointer,
                                  std::size_t expected_dim) {
  const std::size_t dim = doc.positive_integer(doc.require(obj, pointer, "dim"), pointer + "/dim");
  if (dim != expected_dim) {
    doc.fail(pointer + "/dim", "expected dimension " + std::to_string(expected_dim));
  }
  const Json& rows = doc.require(obj, pointer, "entries");
  const std::string ep = pointer + "/entries";
  if (!rows.is_array() || rows.size() != dim) doc.fail(ep, "expected " + std::to_string(dim) + " rows");
  ComplexMatrix m(dim, dim);
  for (std::size_t r = 0; r < dim; ++r) {
    const auto row = read_amplitudes(doc, rows[r], ep + "/" + std::to_string(r), dim);
    for (std::size_t c = 0; c < dim; ++c) m(r, c) = row[c];
  }
  try {
    return UnitaryMatrix(std::move(m));
  } catch (const Error& e) {
    doc.fail(pointer, e.what());
  }
}

}  // namespace detail

struct CircuitFile {
  std::string kind;  // "comparator" or "sorter"
  std::optional<ComparatorCircuit> comparator;
  std::optional<SorterCircuit> sorter;
  std::vector<std::string> labels;
};

inline CircuitFile load_circuit(std::string text, std::string source) {
  Document doc(std::move(text), std::move(source));
  const Json& root = doc.root();
  doc.check_schema();
  if (!root.contains("schema")) doc.fail("", "circuit files need a \"schema\" field");

  const Json& kind = doc.require(root, "", "kind");
  if (!kind.is_string()) doc.fail("/kind", "kind must be a string");
  CircuitFile out;
  out.kind = kind.get<std::string>();

  auto alphabet = parse_state_set(doc, doc.require(root, "", "alphabet"), "/alphabet");
  out.labels = alphabet.labels;
  if (!is_mutually_orthogonal(alphabet.set)) doc.fail("/alphabet", "alphabet is not mutually orthogonal");
  const std::size_t d = alphabet.set.dim();
  const std::size_t local = kFlagDim * d * d;

  if (out.kind == "comparator") {
    auto u = detail::read_unitary(doc, doc.require(root, "", "unitary"), "/unitary", local);
    out.comparator = ComparatorCircuit{std::move(u), std::move(alphabet.set)};
  } else if (out.kind == "sorter") {
    const std::size_t n =
        doc.positive_integer(doc.require(root, "", "n_registers"), "/n_registers");
    if (n < kMinSortRegisters || n > kMaxSortRegisters) doc.fail("/n_registers", "register count out of range");
    const Json& stages = doc.require(root, "", "stages");
    if (!stages.is_array()) doc.fail("/stages", "stages must be an array");
    SorterCircuit c{{}, n, std::move(alphabet.set)};
    for (std::size_t s = 0; s < stages.size(); ++s) {
      const std::string p = "/stages/" + std::to_string(s);
      const std::size_t pos = doc.positive_integer(doc.require(stages[s], p, "position"), p + "/position");
      if (pos + 1 > n) doc.fail(p + "/position", "position must leave room for a right neighbour");
      c.stages.push_back({pos, detail::read_unitary(doc, doc.require(stages[s], p, "unitary"),
                                                    p + "/unitary", local)});
    }
    out.sorter = std::move(c);
  } else {
    doc.fail("/kind", "unknown circuit kind \"" + out.kind + "\"");
  }
  return out;
}

}  // namespace qorder::io

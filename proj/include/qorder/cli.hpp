#pragma once

// Implementation of the `qorder` verbs. Each command writes its report to
// `out`, diagnostics to `err`, and returns the process exit code.

#include <cerrno>
#include <cstdlib>
#include <fstream>
#include <iomanip>
#include <optional>
#include <ostream>
#include <sstream>
#include <string>
#include <vector>

#include "qorder/error.hpp"
#include "qorder/feasibility.hpp"
#include "qorder/io.hpp"
#include "qorder/linalg.hpp"
#include "qorder/ordering.hpp"
#include "qorder/simulator.hpp"
#include "qorder/synthesis.hpp"

namespace qorder::cli {

namespace exit_code {
inline constexpr int kFeasible = 0;
inline constexpr int kOk = 0;
inline constexpr int kInfeasible = 1;
inline constexpr int kNecessaryTestsPassed = 2;
inline constexpr int kDecodeFailed = 3;
inline constexpr int kDemoExpectationsUnmet = 4;
inline constexpr int kUsage = 64;
inline constexpr int kDataError = 65;
}  // namespace exit_code

inline constexpr const char* kToleranceEnv = "QORDER_TOL";

/// --tol beats $QORDER_TOL beats the 1e-9 default. Throws "bad-tol".
inline double resolve_tolerance(std::optional<double> flag) {
  if (flag) {
    if (!(*flag >= 0.0)) throw Error("bad-tol", "tolerance must be nonnegative");
    return *flag;
  }
  if (const char* env = std::getenv(kToleranceEnv); env != nullptr && *env != '\0') {
    char* end = nullptr;
    errno = 0;
    const double v = std::strtod(env, &end);
    if (errno != 0 || end == env || *end != '\0' || !(v >= 0.0)) {
      throw Error("bad-tol", std::string(kToleranceEnv) + "=\"" + env + "\" is not a nonnegative number");
    }
    return v;
  }
  return kDefaultTolerance;
}

inline int verdict_exit_code(Verdict v) {
  switch (v) {
    case Verdict::Feasible: return exit_code::kFeasible;
    case Verdict::Infeasible: return exit_code::kInfeasible;
    case Verdict::NecessaryTestsPassed: return exit_code::kNecessaryTestsPassed;
  }
  return exit_code::kDataError;
}

namespace detail {

inline std::optional<std::string> read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) return std::nullopt;
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

inline std::string format_complex(Complex z) {
  std::ostringstream ss;
  ss << std::setprecision(10) << z.real() << (z.imag() < 0 ? "-" : "+") << std::abs(z.imag()) << "i";
  return ss.str();
}

inline std::string join(const std::vector<std::size_t>& v, const char* sep = ",") {
  std::string s;
  for (std::size_t k = 0; k < v.size(); ++k) s += (k ? sep : "") + std::to_string(v[k]);
  return s;
}

inline void print_report(std::ostream& out, const std::string& heading, const FeasibilityReport& r,
                         const std::vector<std::string>& labels) {
  out << heading << "\n";
  out << "  verdict:      " << to_string(r.verdict) << "\n";
  out << "  tolerance:    " << std::setprecision(10) << r.tolerance << "\n";
  out << "  max residual: " << std::setprecision(10) << r.max_residual << "\n";
  if (r.violations.empty()) return;
  out << "  violations:\n";
  for (const auto& v : r.violations) {
    out << "    (" << join(v.indices) << ")";
    if (!labels.empty()) {
      out << " [";
      for (std::size_t k = 0; k < v.indices.size(); ++k) out << (k ? " " : "") << labels[v.indices[k] - 1];
      out << "]";
    }
    out << "  lhs=" << format_complex(v.lhs) << "  rhs=" << format_complex(v.rhs)
        << "  residual=" << std::setprecision(10) << v.residual << "\n";
  }
}

inline void print_warnings(std::ostream& err, const std::vector<std::string>& warnings) {
  for (const auto& w : warnings) err << "warning: " << w << "\n";
}

/// Parses "3,2,1" into 1-based indices. Throws "bad-input".
inline std::vector<std::size_t> parse_indices(const std::string& text) {
  std::vector<std::size_t> out;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) {
    std::size_t used = 0;
    unsigned long v = 0;
    try {
      v = std::stoul(item, &used);
    } catch (const std::exception&) {
      throw Error("bad-input", "\"" + item + "\" is not an index");
    }
    if (used != item.size() || v == 0) throw Error("bad-input", "\"" + item + "\" is not a positive index");
    out.push_back(v);
  }
  if (out.empty()) throw Error("bad-input", "no indices given");
  return out;
}

}  // namespace detail

struct CheckOptions {
  std::string file;
  std::string mode = "comparator";  // comparator | sorter | spec
  std::optional<double> tol;
  bool json = false;
};

inline int cmd_check(const CheckOptions& opt, std::ostream& out, std::ostream& err) {
  double tol = 0.0;
  try {
    tol = resolve_tolerance(opt.tol);
  } catch (const Error& e) {
    err << "error: " << e.what() << "\n";
    return exit_code::kUsage;
  }
  if (opt.mode != "comparator" && opt.mode != "sorter" && opt.mode != "spec") {
    err << "error: unknown mode \"" << opt.mode << "\" (expected comparator, sorter or spec)\n";
    return exit_code::kUsage;
  }
  const auto text = detail::read_file(opt.file);
  if (!text) {
    err << "error: cannot read " << opt.file << "\n";
    return exit_code::kDataError;
  }

  try {
    FeasibilityReport report;
    std::vector<std::string> labels;
    if (opt.mode == "spec") {
      auto f = io::load_spec(*text, opt.file);
      detail::print_warnings(err, f.warnings);
      report = unitary_extension_feasible(f.spec, tol);
      labels = std::move(f.labels);
    } else {
      auto f = io::load_state_set(*text, opt.file);
      detail::print_warnings(err, f.warnings);
      report = opt.mode == "comparator" ? comparator_feasible(f.set, tol) : sorter_feasible(f.set, tol);
      labels = std::move(f.labels);
    }

    if (opt.json) {
      io::Json j;
      j["schema"] = io::kSchemaVersion;
      j["command"] = "check";
      j["mode"] = opt.mode;
      j["file"] = opt.file;
      j["labels"] = labels;
      j["report"] = io::to_json(report);
      out << j.dump(2) << "\n";
    } else {
      detail::print_report(out, "check " + opt.mode + " " + opt.file, report, labels);
    }
    return verdict_exit_code(report.verdict);
  } catch (const io::FileError& e) {
    err << e.source() << ":" << e.line() << ": error: " << e.what() << "\n";
    return exit_code::kDataError;
  } catch (const Error& e) {
    err << opt.file << ": error: " << e.what() << "\n";
    return exit_code::kDataError;
  }
}

struct SynthesizeOptions {
  std::string file;
  std::string mode = "comparator";  // comparator | sorter
  std::optional<long long> n;
  std::string out_path;
  bool json = false;
};

/// Circuit document for a loaded state-set file, or an exit code.
inline int synthesize_to_string(const SynthesizeOptions& opt, std::string& document, std::ostream& err) {
  if (opt.mode != "comparator" && opt.mode != "sorter") {
    err << "error: unknown mode \"" << opt.mode << "\" (expected comparator or sorter)\n";
    return exit_code::kUsage;
  }
  if (opt.mode == "sorter" &&
      (!opt.n || *opt.n < static_cast<long long>(kMinSortRegisters) ||
       *opt.n > static_cast<long long>(kMaxSortRegisters))) {
    err << "error: sorter needs --n in " << kMinSortRegisters << ".." << kMaxSortRegisters << "\n";
    return exit_code::kUsage;
  }
  const auto text = detail::read_file(opt.file);
  if (!text) {
    err << "error: cannot read " << opt.file << "\n";
    return exit_code::kDataError;
  }
  try {
    auto f = io::load_state_set(*text, opt.file);
    detail::print_warnings(err, f.warnings);
    if (!is_mutually_orthogonal(f.set)) {
      err << opt.file << ": error: the states are not mutually orthogonal, so no unitary comparator exists; "
          << "run `qorder check --mode comparator " << opt.file << "` for the certificate\n";
      return exit_code::kInfeasible;
    }
    if (opt.mode == "comparator") {
      document = io::dump_circuit(io::to_json(build_comparator(f.set), f.labels));
    } else {
      document = io::dump_circuit(io::to_json(build_sorter(f.set, static_cast<std::size_t>(*opt.n)), f.labels));
    }
    return exit_code::kOk;
  } catch (const io::FileError& e) {
    err << e.source() << ":" << e.line() << ": error: " << e.what() << "\n";
    return exit_code::kDataError;
  } catch (const Error& e) {
    err << opt.file << ": error: " << e.what() << "\n";
    return exit_code::kDataError;
  }
}

inline int cmd_synthesize(const SynthesizeOptions& opt, std::ostream& out, std::ostream& err) {
  if (opt.out_path.empty()) {
    err << "error: --out is required\n";
    return exit_code::kUsage;
  }
  std::string document;
  if (const int rc = synthesize_to_string(opt, document, err); rc != exit_code::kOk) return rc;

  std::ofstream file(opt.out_path, std::ios::binary | std::ios::trunc);
  file << document;
  file.close();
  if (!file) {
    err << "error: cannot write " << opt.out_path << "\n";
    return exit_code::kDataError;
  }
  if (opt.json) {
    io::Json j;
    j["schema"] = io::kSchemaVersion;
    j["command"] = "synthesize";
    j["mode"] = opt.mode;
    j["out"] = opt.out_path;
    j["bytes"] = document.size();
    out << j.dump(2) << "\n";
  } else {
    out << "wrote " << opt.mode << " circuit to " << opt.out_path << "\n";
  }
  return exit_code::kOk;
}

struct SimulateOptions {
  std::string circuit;
  std::string input;
  bool json = false;
};

inline int cmd_simulate(const SimulateOptions& opt, std::ostream& out, std::ostream& err) {
  std::vector<std::size_t> input;
  try {
    input = detail::parse_indices(opt.input);
  } catch (const Error& e) {
    err << "error: " << e.what() << "\n";
    return exit_code::kUsage;
  }
  const auto text = detail::read_file(opt.circuit);
  if (!text) {
    err << "error: cannot read " << opt.circuit << "\n";
    return exit_code::kDataError;
  }

  io::CircuitFile circuit;
  try {
    circuit = io::load_circuit(*text, opt.circuit);
  } catch (const io::FileError& e) {
    err << e.source() << ":" << e.line() << ": error: " << e.what() << "\n";
    return exit_code::kDataError;
  } catch (const Error& e) {
    err << opt.circuit << ": error: " << e.what() << "\n";
    return exit_code::kDataError;
  }

  const OrderedStateSet& set = circuit.comparator ? circuit.comparator->set : circuit.sorter->set;
  const std::size_t expected = circuit.comparator ? 2 : circuit.sorter->n_registers;
  if (input.size() != expected) {
    err << "error: this circuit takes " << expected << " indices\n";
    return exit_code::kUsage;
  }
  for (std::size_t k : input)
    if (k > set.size()) {
      err << "error: index " << k << " outside 1.." << set.size() << "\n";
      return exit_code::kUsage;
    }

  io::Json j;
  j["schema"] = io::kSchemaVersion;
  j["command"] = "simulate";
  j["kind"] = circuit.kind;
  j["input"] = input;
  try {
    if (circuit.comparator) {
      const auto r = run_compare(*circuit.comparator, input[0], input[1]);
      j["output"] = std::vector<std::size_t>{r.first, r.second};
      j["flag"] = r.flag;
      j["flag_distribution"] = r.flag_distribution;
      if (!opt.json) {
        out << "output: " << r.first << "," << r.second << "\n";
        out << "flag: " << r.flag << "\n";
      }
    } else {
      const auto r = run_sort(*circuit.sorter, input);
      j["output"] = r.output_indices;
      j["flags"] = r.flags;
      if (!opt.json) {
        out << "output: " << detail::join(r.output_indices) << "\n";
        out << "flags: " << detail::join(r.flags) << "\n";
      }
    }
  } catch (const Error& e) {
    err << "error: " << e.what() << "\n";
    return e.code() == "decode-failed" ? exit_code::kDecodeFailed : exit_code::kDataError;
  }
  if (opt.json) out << j.dump(2) << "\n";
  return exit_code::kOk;
}

/// The three no-go certificates run by `demo-nogo`.
struct DemoCase {
  std::string name;
  std::string description;
  FeasibilityReport report;
};

inline std::vector<DemoCase> demo_nogo_cases(double tol) {
  const double h = 1.0 / std::sqrt(2.0);
  const StateVector zero{1.0, 0.0};
  const StateVector one{0.0, 1.0};
  const StateVector plus{h, h};

  std::vector<DemoCase> cases;
  cases.push_back({"comparator", "compare {|0>, |+>}",
                   comparator_feasible(OrderedStateSet({zero, plus}), tol)});
  cases.push_back({"sorter", "sort {|+>, |0>, |1>}",
                   sorter_feasible(OrderedStateSet({plus, zero, one}), tol)});
  const PartialIsometrySpec cloning({{tensor(zero, zero), tensor(zero, zero)},
                                     {tensor(plus, zero), tensor(plus, plus)}});
  cases.push_back({"cloning", "|psi>|0> -> |psi>|psi> for psi in {|0>, |+>}",
                   unitary_extension_feasible(cloning, tol)});
  return cases;
}

struct DemoOptions {
  std::optional<double> tol;
  bool json = false;
};

inline int cmd_demo_nogo(const DemoOptions& opt, std::ostream& out, std::ostream& err) {
  double tol = 0.0;
  try {
    tol = resolve_tolerance(opt.tol);
  } catch (const Error& e) {
    err << "error: " << e.what() << "\n";
    return exit_code::kUsage;
  }
  const auto cases = demo_nogo_cases(tol);
  bool all_infeasible = true;
  for (const auto& c : cases) all_infeasible = all_infeasible && c.report.verdict == Verdict::Infeasible;

  if (opt.json) {
    io::Json j;
    j["schema"] = io::kSchemaVersion;
    j["command"] = "demo-nogo";
    j["tolerance"] = tol;
    io::Json certs = io::Json::array();
    for (const auto& c : cases) {
      io::Json e;
      e["name"] = c.name;
      e["description"] = c.description;
      e["report"] = io::to_json(c.report);
      certs.push_back(std::move(e));
    }
    j["certificates"] = std::move(certs);
    j["expectations_met"] = all_infeasible;
    out << j.dump(2) << "\n";
  } else {
    for (const auto& c : cases) detail::print_report(out, c.name + ": " + c.description, c.report, {});
    out << (all_infeasible ? "all three transformations are infeasible\n"
                           : "demo expectations not met\n");
  }
  if (!all_infeasible) {
    err << "demo expectations not met\n";
    return exit_code::kDemoExpectationsUnmet;
  }
  return exit_code::kOk;
}

}  // namespace qorder::cli

// teglab: inspect digits and paths, solve, run convergence studies, validate.
//
// Exit codes: 0 success, 1 validation failure, 2 argument error,
// 3 runtime or solver error.

#include <cmath>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <map>
#include <memory>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "teglab/base_repr.hpp"
#include "teglab/errors.hpp"
#include "teglab/solver.hpp"
#include "teglab/teg.hpp"
#include "teglab/validation.hpp"

namespace {

using namespace teglab;

constexpr int kExitValidation = 1;
constexpr int kExitArgument = 2;
constexpr int kExitRuntime = 3;

// Argument errors raised after CLI11 has finished parsing.
struct UsageError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

std::string num(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

std::string trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string::npos) return {};
  const auto e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

// key = value lines with # comments, appended as --key value for keys not
// already present on the command line. "true" / "false" toggle flags.
std::vector<std::string> expand_config(std::vector<std::string> args) {
  std::string path;
  for (std::size_t i = 0; i < args.size(); ++i) {
    if (args[i] == "--config" && i + 1 < args.size()) {
      path = args[i + 1];
      args.erase(args.begin() + static_cast<long>(i), args.begin() + static_cast<long>(i) + 2);
      break;
    }
    if (args[i].rfind("--config=", 0) == 0) {
      path = args[i].substr(9);
      args.erase(args.begin() + static_cast<long>(i));
      break;
    }
  }
  if (path.empty()) return args;
  std::ifstream in(path);
  if (!in) throw UsageError("cannot open config file '" + path + "'");
  std::set<std::string> given;
  for (const auto& a : args) {
    if (a.rfind("--", 0) == 0) given.insert(a.substr(2, a.find('=') == std::string::npos ? std::string::npos : a.find('=') - 2));
  }
  std::string line;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    const auto hash = line.find('#');
    if (hash != std::string::npos) line.erase(hash);
    line = trim(line);
    if (line.empty()) continue;
    const auto eq = line.find('=');
    if (eq == std::string::npos) {
      throw UsageError(path + ":" + std::to_string(lineno) + ": expected 'key = value'");
    }
    const std::string key = trim(line.substr(0, eq));
    const std::string value = trim(line.substr(eq + 1));
    if (key.empty()) throw UsageError(path + ":" + std::to_string(lineno) + ": empty key");
    if (given.count(key) != 0) continue;
    if (value == "false") continue;
    args.push_back("--" + key);
    if (value != "true") args.push_back(value);
  }
  return args;
}

std::vector<double> parse_numbers(const std::string& text, char sep, const std::string& what) {
  std::vector<double> out;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, sep)) {
    item = trim(item);
    if (item.empty()) throw UsageError("empty entry in " + what);
    std::size_t used = 0;
    double v = 0;
    try {
      v = std::stod(item, &used);
    } catch (const std::exception&) {
      used = 0;
    }
    if (used != item.size() || !std::isfinite(v)) throw UsageError("invalid number '" + item + "' in " + what);
    out.push_back(v);
  }
  return out;
}

// "x,x,..." for K = 1; "a,b;c,d;..." for K > 1.
std::vector<solver::Point> parse_points(const std::string& text, int K) {
  std::vector<solver::Point> points;
  if (K == 1) {
    for (double v : parse_numbers(text, ',', "--points")) points.push_back({v});
    return points;
  }
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ';')) {
    auto p = parse_numbers(item, ',', "--points");
    if (static_cast<int>(p.size()) != K) throw UsageError("each point needs " + std::to_string(K) + " coordinates");
    points.push_back(std::move(p));
  }
  return points;
}

class Output {
 public:
  explicit Output(const std::string& path) {
    if (path.empty() || path == "-") return;
    file_ = std::make_unique<std::ofstream>(path, std::ios::binary);
    if (!*file_) throw std::runtime_error("cannot open output file '" + path + "'");
  }
  std::ostream& stream() { return file_ ? *file_ : std::cout; }

 private:
  std::unique_ptr<std::ofstream> file_;
};

struct EquationOptions {
  std::string eq = "diffusion";
  std::string potential = "0";
  std::string initial = "exp(-x^2)";
  std::string initial_im;
  double T = 1.0;
  int K = 1;
  std::string precision = "auto";
  std::string points;
};

void add_equation_options(CLI::App* cmd, EquationOptions& o) {
  cmd->add_option("--eq", o.eq, "Equation")->check(CLI::IsMember({"diffusion", "schrodinger"}));
  cmd->add_option("--potential", o.potential, "Potential V(x,t) or U(x,t)");
  cmd->add_option("--initial", o.initial, "Initial data (real part)");
  cmd->add_option("--initial-im", o.initial_im, "Initial data (imaginary part)");
  cmd->add_option("--T", o.T, "Total time")->check(CLI::NonNegativeNumber);
  cmd->add_option("--K", o.K, "Spatial dimension")->check(CLI::Range(1, 3));
  cmd->add_option("--precision", o.precision, "Working precision")->check(CLI::IsMember({"auto", "double"}));
  cmd->add_option("--points", o.points, "Evaluation points: x,x,... or x1,x2;x1,x2;...");
}

solver::SolveConfig make_config(const EquationOptions& o) {
  solver::SolveConfig c;
  c.kind = {o.eq == "diffusion" ? teg::Equation::diffusion : teg::Equation::schrodinger, o.K};
  c.T = o.T;
  c.potential = dsl::Field::parse(o.potential, o.K);
  c.initial = dsl::ComplexField::parse(o.initial, o.initial_im, o.K);
  if (!o.points.empty()) c.points = parse_points(o.points, o.K);
  c.precision = o.precision == "double" ? prop::Precision::native_double : prop::Precision::automatic;
  return c;
}

const std::map<std::string, solver::Method> kMethods{{"compact_enumerate", solver::Method::compact_enumerate},
                                                     {"lattice_dp", solver::Method::lattice_dp},
                                                     {"binomial_closed_form", solver::Method::binomial_closed_form}};

std::string method_name(solver::Method m) {
  for (const auto& [name, value] : kMethods) {
    if (value == m) return name;
  }
  return "?";
}

int cmd_digits(std::int64_t M, std::int64_t base, int N) {
  const auto euclid = base::digits_euclid(M, base).digits;
  std::cout << "m,euclid,csi\n";
  bool agree = true;
  for (std::size_t m = 0; m < euclid.size(); ++m) {
    const std::int64_t c = base::digit_csi(M, base, static_cast<int>(m), N);
    agree = agree && c == euclid[m];
    std::cout << m << ',' << euclid[m] << ',' << c << '\n';
  }
  if (!agree) {
    std::cerr << "teglab: digit extraction disagrees with Euclidean division (M >= b^(N+1)?)\n";
    return kExitValidation;
  }
  return 0;
}

std::string shift_text(const teg::Shift& s) {
  if (s.size() == 1) return std::to_string(s[0]);
  std::string out = "(";
  for (std::size_t i = 0; i < s.size(); ++i) out += (i ? " " : "") + std::to_string(s[i]);
  return out + ")";
}

int cmd_path(std::int64_t M, int order, int N) {
  if (order < 2 || (order != 2 && order % 2 == 0) || order > 7) {
    throw UsageError("--order must be 2 (diffusion) or 3, 5, 7 (Schrodinger in 1, 2, 3 dimensions)");
  }
  const teg::TegSpec spec = order == 2 ? teg::TegSpec::diffusion(N, 1.0) : teg::TegSpec::schrodinger(N, 1.0, (order - 1) / 2);
  if (M < 0 || M >= spec.path_count()) {
    throw UsageError("--M must lie in [0, " + std::to_string(spec.path_count()) + ")");
  }
  const teg::Path p = teg::path_from_index(M, spec);
  std::string moves;
  for (int c : p.moves) moves += std::to_string(c);
  std::string shifts;
  for (std::size_t k = 0; k < p.prefix_shifts.size(); ++k) shifts += (k ? "," : "") + shift_text(p.prefix_shifts[k]);
  const auto C = teg::prefactor_C(M, spec);
  std::cout << "field,value\n"
            << "M," << M << '\n'
            << "moves," << moves << '\n'
            << "prefix_shifts,\"" << shifts << "\"\n"
            << "S," << shift_text(p.terminal) << '\n'
            << "C_re," << num(C.real()) << '\n'
            << "C_im," << num(C.imag()) << '\n';
  return 0;
}

void write_solution(std::ostream& out, const solver::SolveConfig& c, const std::vector<solver::Point>& points,
                    const std::vector<std::complex<double>>& values) {
  const int K = c.kind.dimension;
  if (K == 1) {
    out << "x";
  } else {
    for (int i = 1; i <= K; ++i) out << (i > 1 ? "," : "") << 'x' << i;
  }
  out << ",re,im,method,N,T\n";
  for (std::size_t i = 0; i < points.size(); ++i) {
    for (int j = 0; j < K; ++j) out << (j ? "," : "") << num(points[i][static_cast<std::size_t>(j)]);
    out << ',' << num(values[i].real()) << ',' << num(values[i].imag()) << ',' << method_name(c.method) << ','
        << c.N << ',' << num(c.T) << '\n';
  }
}

int cmd_solve(const EquationOptions& o, int N, const std::string& method, bool verify, const std::string& out_path) {
  solver::SolveConfig c = make_config(o);
  c.N = N;
  c.method = kMethods.at(method);
  if (c.points.empty()) c.points = solver::default_points(o.K);
  solver::validate(c);
  const auto values = solver::solve(c);
  if (verify) {
    solver::SolveConfig other = c;
    other.method = c.method == solver::Method::compact_enumerate ? solver::Method::lattice_dp
                                                                  : solver::Method::compact_enumerate;
    const auto check = solver::solve(other);
    double worst = 0.0;
    for (std::size_t i = 0; i < values.size(); ++i) {
      worst = std::max(worst, std::abs(values[i] - check[i]) / (1.0 + std::abs(check[i])));
    }
    std::cerr << "verify: " << method_name(c.method) << " vs " << method_name(other.method)
              << " max relative difference " << num(worst) << '\n';
    if (!(worst <= 1e-10)) {
      std::cerr << "teglab: verification failed\n";
      return kExitValidation;
    }
  }
  Output out(out_path);
  write_solution(out.stream(), c, c.points, values);
  return 0;
}

int cmd_converge(const EquationOptions& o, const std::string& Nlist, const std::string& reference,
                 const std::string& exact, const std::string& exact_im, double L, double h, int substeps,
                 bool timing, const std::string& out_path) {
  solver::SolveConfig c = make_config(o);
  std::vector<int> Ns;
  for (double v : parse_numbers(Nlist, ',', "--Nlist")) {
    if (v != std::floor(v) || v < 1 || v > 100000) throw UsageError("--Nlist entries must be positive integers");
    Ns.push_back(static_cast<int>(v));
  }
  solver::ConvergenceOptions opt;
  if (reference == "closed_form") {
    if (exact.empty()) throw UsageError("--reference closed_form needs --exact");
    opt.reference = solver::Reference::closed_form;
    opt.exact = dsl::ComplexField::parse(exact, exact_im, o.K);
  } else if (reference == "gaussian_integral") {
    opt.reference = solver::Reference::gaussian_integral;
  } else {
    opt.reference = solver::Reference::matrix_exponential;
  }
  opt.grid = {L, h};
  opt.substeps = substeps;
  solver::ReferenceReport report;
  const auto rows = solver::convergence_study(c, Ns, opt, &report);
  if (report.underresolved) {
    std::cerr << "warning: reference grid underresolved (boundary amplitude " << num(report.boundary_amplitude)
              << ")\n";
  }
  Output out(out_path);
  out.stream() << "N,error,runtime_s\n";
  for (const auto& r : rows) out.stream() << r.N << ',' << num(r.error) << ',' << num(timing ? r.runtime_s : 0.0) << '\n';
  return 0;
}

int cmd_validate() {
  bool all = true;
  for (const auto& r : validation::run_all()) {
    std::cout << (r.passed ? "PASS " : "FAIL ") << r.name << ": " << r.detail << '\n';
    all = all && r.passed;
  }
  return all ? 0 : kExitValidation;
}

int run(int argc, char** argv) {
  std::vector<std::string> args(argv + 1, argv + argc);
  try {
    args = expand_config(std::move(args));
  } catch (const UsageError& e) {
    std::cerr << "teglab: " << e.what() << '\n';
    return kExitArgument;
  }

  CLI::App app{"teglab: time-sliced propagators, TEG paths and CSI coefficient extraction"};
  app.set_help_flag("--help", "Print this help message and exit");
  app.require_subcommand(1);
  app.set_version_flag("--version", "teglab 0.1.0");
  app.add_option("--config", "Read key = value defaults from a file");

  std::int64_t M = 0;
  std::int64_t base = 2;
  int N = 8;
  auto* digits = app.add_subcommand("digits", "Base-b digits by Euclidean division and by CSI extraction");
  digits->add_option("--M", M, "Non-negative integer")->required()->check(CLI::NonNegativeNumber);
  digits->add_option("--base", base, "Base b >= 2")->check(CLI::Range(std::int64_t{2}, std::int64_t{1} << 20));
  digits->add_option("--N", N, "Representation length")->required()->check(CLI::Range(0, 62));

  int order = 2;
  auto* path = app.add_subcommand("path", "Decode TEG path M: moves, prefix shifts, S_M and C_M");
  path->add_option("--M", M, "Path index")->required()->check(CLI::NonNegativeNumber);
  path->add_option("--order", order, "Variety order b");
  path->add_option("--N", N, "Slicing number")->required()->check(CLI::Range(1, 62));

  EquationOptions eq;
  std::string method = "lattice_dp";
  bool verify = false;
  std::string out_path;
  auto* solve = app.add_subcommand("solve", "Evaluate the discrete solution at the evaluation points (CSV)");
  add_equation_options(solve, eq);
  solve->add_option("--N", N, "Slicing number")->check(CLI::Range(1, 100000));
  solve->add_option("--method", method, "Evaluation method")
      ->check(CLI::IsMember({"compact_enumerate", "lattice_dp", "binomial_closed_form"}));
  solve->add_flag("--verify", verify, "Cross-check compact_enumerate against lattice_dp");
  solve->add_option("--out", out_path, "Output CSV file (default stdout)");

  std::string Nlist = "16,32,64,128";
  std::string reference = "matrix_exponential";
  std::string exact;
  std::string exact_im;
  double L = 12.0;
  double h = 0.05;
  int substeps = 256;
  bool timing = false;
  auto* converge = app.add_subcommand("converge", "Errors against a reference for a list of N (CSV)");
  add_equation_options(converge, eq);
  converge->add_option("--Nlist", Nlist, "Strictly increasing slicing numbers, comma separated");
  converge->add_option("--reference", reference, "Reference solution")
      ->check(CLI::IsMember({"closed_form", "gaussian_integral", "matrix_exponential"}));
  converge->add_option("--exact", exact, "Exact solution in (x, t) for closed_form (real part)");
  converge->add_option("--exact-im", exact_im, "Exact solution, imaginary part");
  converge->add_option("--L", L, "Reference grid half-width")->check(CLI::PositiveNumber);
  converge->add_option("--h", h, "Reference grid spacing")->check(CLI::PositiveNumber);
  converge->add_option("--substeps", substeps, "Reference substeps")->check(CLI::Range(1, 1000000));
  converge->add_flag("--timing", timing, "Report wall-clock runtime (otherwise 0 for reproducible output)");
  converge->add_option("--out", out_path, "Output CSV file (default stdout)");

  auto* validate = app.add_subcommand("validate", "Run the oracle and identity suite");

  std::vector<std::string> reversed(args.rbegin(), args.rend());
  try {
    app.parse(reversed);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : kExitArgument;
  }

  try {
    if (*digits) return cmd_digits(M, base, N);
    if (*path) return cmd_path(M, order, N);
    if (*solve) return cmd_solve(eq, N, method, verify, out_path);
    if (*converge) return cmd_converge(eq, Nlist, reference, exact, exact_im, L, h, substeps, timing, out_path);
    if (*validate) return cmd_validate();
  } catch (const UsageError& e) {
    std::cerr << "teglab: " << e.what() << '\n';
    return kExitArgument;
  } catch (const SyntaxError& e) {
    std::cerr << "teglab: " << e.what() << '\n';
    return kExitArgument;
  } catch (const InvalidArgument& e) {
    std::cerr << "teglab: " << e.what() << '\n';
    return kExitArgument;
  } catch (const std::exception& e) {
    std::cerr << "teglab: " << e.what() << '\n';
    return kExitRuntime;
  }
  return kExitArgument;
}

}  // namespace

int main(int argc, char** argv) { return run(argc, argv); }

#include "cli.hpp"

#include <cmath>
#include <complex>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <numbers>
#include <optional>
#include <set>
#include <sstream>

#include "CLI11.hpp"
#include "gbspec/cardinal.hpp"
#include "gbspec/errors.hpp"
#include "json.hpp"

namespace gbspec::cli {

using nlohmann::json;

namespace {

std::string num(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

void check_keys(const json& j, const std::set<std::string>& allowed, const std::string& where) {
  if (!j.is_object()) throw ValidationError(where + " must be a JSON object");
  for (const auto& [key, value] : j.items())
    if (!allowed.count(key)) throw ValidationError("unknown key '" + key + "' in " + where);
}

// Expressions may be given as strings or plain numbers.
Expr expr_value(const json& v, const std::string& key) {
  if (v.is_string()) return parse(v.get<std::string>());
  if (v.is_number()) return make_const(v.get<double>());
  throw ValidationError("'" + key + "' must be an expression string or a number");
}

Expr expr_at(const json& j, const std::string& key, const char* fallback) {
  if (!j.contains(key) || j[key].is_null()) return parse(fallback);
  return expr_value(j[key], key);
}

int int_value(const json& v, const std::string& key) {
  if (!v.is_number_integer()) throw ValidationError("'" + key + "' must be an integer");
  return v.get<int>();
}

double number_value(const json& v, const std::string& key) {
  if (!v.is_number()) throw ValidationError("'" + key + "' must be a number");
  return v.get<double>();
}

SectionFamily make_family(const std::string& name, std::optional<double> alpha) {
  const Family tag = family_from_string(name);
  if (tag == Family::Polynomial) return SectionFamily::polynomial();
  if (!alpha) throw ValidationError("alpha is required for the " + to_string(tag) + " family");
  SectionFamily f{tag, *alpha};
  f.validate();
  return f;
}

// Scalar or per-direction list.
template <class T, class Get>
std::vector<T> per_direction(const json& j, const std::string& key, int d, T fallback, Get get) {
  if (!j.contains(key)) return std::vector<T>(d, fallback);
  const json& v = j[key];
  if (!v.is_array()) return std::vector<T>(d, get(v, key));
  if (static_cast<int>(v.size()) != d) throw ValidationError("'" + key + "' needs one entry per dimension");
  std::vector<T> out;
  for (const auto& e : v) out.push_back(get(e, key));
  return out;
}

json load_json(const std::string& text) {
  try {
    return json::parse(text);
  } catch (const json::exception& e) {
    throw ValidationError(std::string("malformed JSON: ") + e.what());
  }
}

std::string read_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ValidationError("cannot read '" + path + "'");
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

json report_json(const DistributionReport& r) {
  json j;
  j["order"] = r.d_n;
  j["mean_abs_discrepancy"] = r.mean_abs_discrepancy;
  j["moment_errors"] = r.moment_errors;
  j["max_imag"] = r.max_imag;
  j["symbol_min"] = r.symbol_min;
  j["symbol_max"] = r.symbol_max;
  j["eps"] = r.eps;
  j["outliers"] = r.outliers;
  return j;
}

json family_json(const SectionFamily& f) {
  json j;
  j["family"] = to_string(f.tag);
  if (f.tag != Family::Polynomial) j["alpha"] = f.phase;
  return j;
}

// Sorted by real part, then imaginary part.
std::vector<std::complex<double>> sorted(const Eigen::VectorXcd& e) {
  std::vector<std::complex<double>> v(e.begin(), e.end());
  std::sort(v.begin(), v.end(), [](auto a, auto b) { return a.real() != b.real() ? a.real() < b.real() : a.imag() < b.imag(); });
  return v;
}

void write_eigs(std::ostream& os, const Eigen::VectorXcd& e) {
  os << "index,real,imag\n";
  const auto v = sorted(e);
  for (std::size_t k = 0; k < v.size(); ++k) os << k << ',' << num(v[k].real()) << ',' << num(v[k].imag()) << '\n';
}

void write_matrix(std::ostream& os, const Eigen::MatrixXd& A) {
  for (Eigen::Index j = 0; j < A.cols(); ++j) os << (j ? "," : "") << "c" << j + 1;
  os << '\n';
  for (Eigen::Index i = 0; i < A.rows(); ++i) {
    for (Eigen::Index j = 0; j < A.cols(); ++j) os << (j ? "," : "") << num(A(i, j));
    os << '\n';
  }
}

// int64 rows, int64 cols, then row-major doubles, native byte order.
void write_binary(const std::string& path, const Eigen::MatrixXd& A) {
  std::ofstream f(path, std::ios::binary);
  if (!f) throw ValidationError("cannot write '" + path + "'");
  const std::int64_t dims[2] = {A.rows(), A.cols()};
  f.write(reinterpret_cast<const char*>(dims), sizeof dims);
  const Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor> R = A;
  f.write(reinterpret_cast<const char*>(R.data()), static_cast<std::streamsize>(sizeof(double) * R.size()));
}

// --out file or the given stream
class Sink {
 public:
  Sink(const std::string& path, std::ostream& fallback) : os_(&fallback) {
    if (!path.empty()) {
      file_.open(path);
      if (!file_) throw ValidationError("cannot write '" + path + "'");
      os_ = &file_;
    }
  }
  std::ostream& operator*() { return *os_; }

 private:
  std::ofstream file_;
  std::ostream* os_;
};

struct FamilyOpts {
  std::string family = "polynomial";
  std::optional<double> alpha;

  void add(CLI::App* app) {
    app->add_option("--family", family, "polynomial | hyperbolic | trigonometric");
    app->add_option("--alpha", alpha, "phase parameter");
  }
  SectionFamily get() const { return make_family(family, alpha); }
};

}  // namespace

Problem1D parse_problem_1d(const std::string& text) {
  const json j = load_json(text);
  check_keys(j, {"d", "kappa", "beta", "gamma", "f", "family", "alpha", "mode", "p", "geometry"}, "problem");
  if (j.contains("d") && int_value(j["d"], "d") != 1) throw ValidationError("this command needs a d = 1 problem");
  Problem1D pr;
  pr.coeffs.kappa = ScalarField(expr_at(j, "kappa", "1"));
  pr.coeffs.beta = ScalarField(expr_at(j, "beta", "0"));
  pr.coeffs.gamma = ScalarField(expr_at(j, "gamma", "0"));
  pr.coeffs.f = ScalarField(expr_at(j, "f", "0"));
  if (j.contains("family") || j.contains("alpha")) {
    const std::string fam = j.contains("family") ? j["family"].get<std::string>() : "hyperbolic";
    pr.family = make_family(fam, j.contains("alpha") ? std::optional(number_value(j["alpha"], "alpha")) : std::nullopt);
  }
  if (j.contains("mode")) {
    if (!j["mode"].is_string()) throw ValidationError("'mode' must be a string");
    pr.mode = phase_mode_from_string(j["mode"].get<std::string>());
  }
  if (j.contains("p")) pr.p = int_value(j["p"], "p");
  if (pr.p < 2) throw ValidationError("p must be at least 2");
  if (j.contains("geometry") && !j["geometry"].is_null()) {
    const json& g = j["geometry"];
    check_keys(g, {"G", "G1", "G2"}, "geometry");
    if (!g.contains("G")) throw ValidationError("geometry needs 'G'");
    GeometryMap1D geo = GeometryMap1D::from_map(ScalarField(expr_value(g["G"], "G")));
    if (g.contains("G1") && !g["G1"].is_null()) {
      geo.G1 = ScalarField(expr_value(g["G1"], "G1"));
      geo.G2 = geo.G1.derivative();
    }
    if (g.contains("G2") && !g["G2"].is_null()) geo.G2 = ScalarField(expr_value(g["G2"], "G2"));
    pr.geometry = geo;
  }
  pr.coeffs.validate();
  pr.geometry.validate();
  return pr;
}

ProblemConfigMD parse_problem_md(const std::string& text) {
  const json j = load_json(text);
  check_keys(j, {"d", "K", "beta", "gamma", "f", "family", "alpha", "mode", "p", "nu", "geometry"}, "problem");
  const int d = j.contains("d") ? int_value(j["d"], "d") : 2;
  if (d < 2 || d > 3) throw ValidationError("multivariate problems need d = 2 or 3");
  ProblemMD pr = ProblemMD::laplacian(d, 2);
  if (j.contains("K")) {
    const json& K = j["K"];
    if (!K.is_array() || static_cast<int>(K.size()) != d) throw ValidationError("'K' must be a d x d array");
    for (int a = 0; a < d; ++a) {
      if (!K[a].is_array() || static_cast<int>(K[a].size()) != d) throw ValidationError("'K' must be a d x d array");
      for (int b = 0; b < d; ++b) pr.K[a][b] = expr_value(K[a][b], "K");
    }
  }
  if (j.contains("beta")) {
    const json& B = j["beta"];
    if (!B.is_array() || static_cast<int>(B.size()) != d) throw ValidationError("'beta' needs one entry per dimension");
    for (int a = 0; a < d; ++a) pr.beta[a] = expr_value(B[a], "beta");
  }
  pr.gamma = expr_at(j, "gamma", "0");
  pr.p = per_direction<int>(j, "p", d, 2, int_value);
  pr.nu = per_direction<int>(j, "nu", d, 1, int_value);
  const auto names = per_direction<std::string>(j, "family", d, "polynomial", [](const json& v, const std::string& key) {
    if (!v.is_string()) throw ValidationError("'" + key + "' must be a string");
    return v.get<std::string>();
  });
  std::vector<std::optional<double>> alphas(d);
  if (j.contains("alpha")) {
    const auto a = per_direction<double>(j, "alpha", d, 0.0, number_value);
    for (int k = 0; k < d; ++k) alphas[k] = a[k];
  }
  for (int a = 0; a < d; ++a) pr.family[a] = make_family(names[a], alphas[a]);
  if (j.contains("mode")) {
    if (!j["mode"].is_string()) throw ValidationError("'mode' must be a string");
    pr.mode = phase_mode_from_string(j["mode"].get<std::string>());
  }
  GeometryMapMD geo = GeometryMapMD::identity(d);
  if (j.contains("geometry") && !j["geometry"].is_null()) {
    const json& g = j["geometry"];
    check_keys(g, {"G"}, "geometry");
    if (!g.contains("G") || !g["G"].is_array() || static_cast<int>(g["G"].size()) != d)
      throw ValidationError("geometry 'G' needs one expression per dimension");
    std::vector<Expr> comps;
    for (const auto& e : g["G"]) comps.push_back(expr_value(e, "G"));
    geo = GeometryMapMD::from_maps(std::move(comps));
  }
  pr.validate();
  geo.validate();
  return {pr, geo};
}

DistributionReport distribution_1d(const Problem1D& pr, int n, const std::vector<double>& eps_rel) {
  const GBBasis basis = gb_basis(n, pr.p, pr.family, pr.mode);
  const CollocationSystem sys = assemble(pr.coeffs, pr.geometry, basis);
  const Eigen::VectorXcd eigs = eigenvalues_dense(sys.normalized());
  const SymbolFn f = symbol_fn(SymbolKind::F, pr.p, pr.mode == PhaseMode::Nested ? SectionFamily::polynomial() : pr.family);
  const auto kappa = pr.coeffs.kappa;
  const auto geo = pr.geometry;
  auto weight = [kappa, geo](double x) {
    const double g1 = geo.G1(x);
    return kappa(geo.G(x)) / (g1 * g1);
  };
  double wmax = 0.0;
  for (int k = 0; k <= 1000; ++k) wmax = std::max(wmax, std::abs(weight(k / 1000.0)));
  const double scale = wmax * std::max(std::abs(symbol_max(f)), 1e-300);
  std::vector<double> eps;
  for (double e : eps_rel) eps.push_back(e * scale);
  return weyl_report(eigs, symbol_sampler(weight, [f](double t) { return f(t); }), eps);
}

DistributionReport distribution_md(const ProblemConfigMD& pr, int n, const std::vector<double>& eps_rel) {
  const CollocationSystemMD sys = assemble_md(pr.problem, pr.geometry, n);
  const Eigen::VectorXcd eigs = eigenvalues_dense(sys.A / (static_cast<double>(n) * n));
  const auto probe = md_symbol_samples(pr.problem, pr.geometry, 4096);
  const double scale = std::max(std::abs(probe.front()), std::abs(probe.back()));
  std::vector<double> eps;
  for (double e : eps_rel) eps.push_back(e * scale);
  const ProblemMD problem = pr.problem;
  const GeometryMapMD geometry = pr.geometry;
  return weyl_report(eigs, [problem, geometry](int c) { return md_symbol_samples(problem, geometry, c); }, eps);
}

int dispatch(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Spectral analysis of GB-spline collocation matrices", "gbspec"};
  app.require_subcommand(1);
  std::string out_path;
  auto add_out = [&](CLI::App* sub) { sub->add_option("-o,--out", out_path, "output file (default: stdout)"); };

  // cardinal
  auto* cardinal = app.add_subcommand("cardinal", "cardinal GB-spline values (CSV t,value)");
  FamilyOpts card_fam;
  int card_p = 3, card_samples = 200, card_deriv = 0;
  card_fam.add(cardinal);
  cardinal->add_option("--p", card_p, "degree")->check(CLI::PositiveNumber);
  cardinal->add_option("--samples", card_samples, "number of intervals on [0, p+1]")->check(CLI::PositiveNumber);
  cardinal->add_option("--derivative", card_deriv, "derivative order")->check(CLI::NonNegativeNumber);
  add_out(cardinal);

  // symbol
  auto* symbol = app.add_subcommand("symbol", "symbol values on a theta grid (CSV theta,value)");
  FamilyOpts sym_fam;
  std::string sym_kind = "f", sym_form = "sum";
  int sym_p = 3, sym_grid = 512, sym_terms = 500;
  sym_fam.add(symbol);
  symbol->add_option("--kind", sym_kind, "h | g | f");
  symbol->add_option("--p", sym_p, "degree");
  symbol->add_option("--grid", sym_grid, "number of theta points on [-pi, pi]")->check(CLI::Range(2, 1 << 24));
  symbol->add_option("--form", sym_form, "sum | series | closed")->check(CLI::IsMember({"sum", "series", "closed"}));
  symbol->add_option("--terms", sym_terms, "series truncation K")->check(CLI::PositiveNumber);
  add_out(symbol);

  // bounds
  auto* bounds = app.add_subcommand("bounds", "upper/lower bound scan (JSON)");
  FamilyOpts bnd_fam;
  int bnd_p = 3, bnd_grid = 4096;
  bnd_fam.add(bounds);
  bounds->add_option("--p", bnd_p, "degree");
  bounds->add_option("--grid", bnd_grid, "grid size (>= 64)");
  add_out(bounds);

  // decay
  auto* decay = app.add_subcommand("decay", "f_p(pi)/max f_p over a degree range (CSV)");
  FamilyOpts dec_fam;
  int dec_pmin = 2, dec_pmax = 14;
  dec_fam.add(decay);
  decay->add_option("--pmin", dec_pmin, "first degree");
  decay->add_option("--pmax", dec_pmax, "last degree");
  add_out(decay);

  // assemble
  auto* assemble_cmd = app.add_subcommand("assemble", "collocation matrix of a 1D problem");
  std::string asm_config, asm_which = "A", asm_format = "csv";
  int asm_n = 16;
  assemble_cmd->add_option("--config", asm_config, "problem JSON file");
  assemble_cmd->add_option("--n", asm_n, "number of subintervals")->check(CLI::Range(2, 1 << 20));
  assemble_cmd->add_option("--matrix", asm_which, "A | normalized | K | H | M")
      ->check(CLI::IsMember({"A", "normalized", "K", "H", "M"}));
  assemble_cmd->add_option("--format", asm_format, "csv | binary")->check(CLI::IsMember({"csv", "binary"}));
  add_out(assemble_cmd);

  // eig
  auto* eig = app.add_subcommand("eig", "eigenvalues of A/n^2 for a 1D problem (CSV)");
  std::string eig_config;
  int eig_n = 16;
  bool eig_raw = false;
  eig->add_option("--config", eig_config, "problem JSON file");
  eig->add_option("--n", eig_n, "number of subintervals")->check(CLI::Range(2, 1 << 20));
  eig->add_flag("--raw", eig_raw, "use A instead of A/n^2");
  add_out(eig);

  // distribution
  auto* dist = app.add_subcommand("distribution", "1D Weyl distribution report (JSON)");
  std::string dist_config;
  std::vector<int> dist_n{64, 128};
  std::vector<double> dist_eps{0.1};
  dist->add_option("--config", dist_config, "problem JSON file (default problem if omitted)");
  dist->add_option("--n", dist_n, "comma-separated list of n")->delimiter(',');
  dist->add_option("--eps", dist_eps, "outlier radii relative to the symbol maximum")->delimiter(',');
  add_out(dist);

  // distribution-md
  auto* dist_md = app.add_subcommand("distribution-md", "multivariate Weyl distribution report (JSON)");
  std::string md_config;
  std::vector<int> md_n{12, 20};
  std::vector<double> md_eps{0.1};
  dist_md->add_option("--config", md_config, "problem JSON file (default: 2D Laplacian, p=2, nested)");
  dist_md->add_option("--n", md_n, "comma-separated list of n")->delimiter(',');
  dist_md->add_option("--eps", md_eps, "outlier radii relative to the symbol maximum")->delimiter(',');
  add_out(dist_md);

  // toeplitz
  auto* toep = app.add_subcommand("toeplitz", "Toeplitz matrix of a symbol, or its eigenvalues");
  FamilyOpts toe_fam;
  std::string toe_kind = "f";
  int toe_p = 2, toe_m = 8;
  bool toe_eig = false;
  toe_fam.add(toep);
  toep->add_option("--symbol", toe_kind, "h | g | f");
  toep->add_option("--p", toe_p, "degree");
  toep->add_option("--m", toe_m, "matrix order")->check(CLI::PositiveNumber);
  toep->add_flag("--eig", toe_eig, "print eigenvalues instead of the matrix");
  add_out(toep);

  try {
    std::vector<std::string> reversed(args.rbegin(), args.rend());
    app.parse(reversed);
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return kOk;
  } catch (const CLI::CallForAllHelp&) {
    out << app.help("", CLI::AppFormatMode::All);
    return kOk;
  } catch (const CLI::ParseError& e) {
    err << "error: " << e.what() << "\n\n" << app.help();
    return kInvalid;
  }

  try {
    if (cardinal->parsed()) {
      const CardinalSpline cs = cardinal_spline(card_fam.get(), card_p);
      const PiecewiseFn fn = cardinal_derivative_direct(cs, card_deriv);
      Sink sink(out_path, out);
      *sink << "t,value\n";
      for (int k = 0; k <= card_samples; ++k) {
        const double t = (card_p + 1.0) * k / card_samples;
        *sink << num(t) << ',' << num(fn(t)) << '\n';
      }
    } else if (symbol->parsed()) {
      const SectionFamily fam = sym_fam.get();
      const SymbolKind kind = symbol_kind_from_string(sym_kind);
      std::function<double(double)> eval;
      if (sym_form == "sum") {
        const SymbolFn s = symbol_fn(kind, sym_p, fam);
        eval = [s](double t) { return s(t); };
      } else if (sym_form == "series") {
        symbol_series(kind, sym_p, fam, 0.0, 1);  // degree check up front
        eval = [=](double t) { return symbol_series(kind, sym_p, fam, t, sym_terms); };
      } else {
        if (!has_closed_form(kind, sym_p)) throw UsageError("no closed form for this kind and degree");
        eval = [=](double t) { return symbol_closed_form(kind, sym_p, fam, t); };
      }
      Sink sink(out_path, out);
      *sink << "theta,value\n";
      for (double t : theta_grid(sym_grid)) *sink << num(t) << ',' << num(eval(t)) << '\n';
    } else if (bounds->parsed()) {
      const BoundReport r = bounds_report(bnd_p, bnd_fam.get(), bnd_grid);
      json j = family_json(r.family);
      j["p"] = r.p;
      j["grid_size"] = r.grid_size;
      j["max_h"] = r.max_h;
      j["min_h"] = r.min_h;
      j["max_f"] = r.max_f;
      j["min_f"] = r.min_f;
      j["upper_checked"] = r.upper_checked;
      j["upper_violations"] = r.upper_violations;
      j["lower_checked"] = r.lower_checked;
      j["lower_violations"] = r.lower_violations;
      j["lower_status"] = to_string(r.lower_status);
      j["lower_constant"] = r.lower_constant;
      j["f_at_zero"] = r.f_at_zero;
      j["f_first_diff"] = r.f_first_diff;
      j["f_second_diff"] = r.f_second_diff;
      j["decay_ratio"] = r.decay;
      j["max_residual"] = r.max_residual;
      Sink sink(out_path, out);
      *sink << j.dump(2) << '\n';
    } else if (decay->parsed()) {
      if (dec_pmin < 2 || dec_pmax < dec_pmin) throw UsageError("need 2 <= pmin <= pmax");
      const SectionFamily fam = dec_fam.get();
      Sink sink(out_path, out);
      *sink << "p,f_at_pi,max_f,ratio\n";
      for (int p = dec_pmin; p <= dec_pmax; ++p) {
        const SymbolFn f = symbol_fn(SymbolKind::F, p, fam);
        const double m = symbol_max(f);
        *sink << p << ',' << num(f(std::numbers::pi)) << ',' << num(m) << ',' << num(f(std::numbers::pi) / m) << '\n';
      }
    } else if (assemble_cmd->parsed()) {
      const Problem1D pr = parse_problem_1d(asm_config.empty() ? "{}" : read_file(asm_config));
      const CollocationSystem sys = assemble(pr.coeffs, pr.geometry, gb_basis(asm_n, pr.p, pr.family, pr.mode));
      const Eigen::MatrixXd M = asm_which == "A"            ? sys.A
                                : asm_which == "normalized" ? sys.normalized()
                                : asm_which == "K"          ? sys.K
                                : asm_which == "H"          ? sys.H
                                                            : sys.M;
      if (asm_format == "binary") {
        if (out_path.empty()) throw UsageError("binary output needs --out");
        write_binary(out_path, M);
      } else {
        Sink sink(out_path, out);
        write_matrix(*sink, M);
      }
    } else if (eig->parsed()) {
      const Problem1D pr = parse_problem_1d(eig_config.empty() ? "{}" : read_file(eig_config));
      const CollocationSystem sys = assemble(pr.coeffs, pr.geometry, gb_basis(eig_n, pr.p, pr.family, pr.mode));
      Sink sink(out_path, out);
      write_eigs(*sink, eigenvalues_dense(eig_raw ? sys.A : sys.normalized()));
    } else if (dist->parsed()) {
      const Problem1D pr = parse_problem_1d(dist_config.empty() ? "{}" : read_file(dist_config));
      json j = family_json(pr.family);
      j["p"] = pr.p;
      j["mode"] = to_string(pr.mode);
      j["kappa"] = pr.coeffs.kappa.str();
      j["geometry"] = pr.geometry.G.str();
      j["runs"] = json::array();
      std::vector<double> disc;
      for (int n : dist_n) {
        json run = report_json(distribution_1d(pr, n, dist_eps));
        run["n"] = n;
        disc.push_back(run["mean_abs_discrepancy"].get<double>());
        j["runs"].push_back(run);
      }
      bool decreasing = true;
      for (std::size_t k = 1; k < disc.size(); ++k) decreasing = decreasing && disc[k] < disc[k - 1];
      j["discrepancy_decreasing"] = decreasing;
      Sink sink(out_path, out);
      *sink << j.dump(2) << '\n';
    } else if (dist_md->parsed()) {
      const ProblemConfigMD pr = parse_problem_md(md_config.empty() ? "{}" : read_file(md_config));
      json j;
      j["d"] = pr.problem.d;
      j["p"] = pr.problem.p;
      j["nu"] = pr.problem.nu;
      j["mode"] = to_string(pr.problem.mode);
      j["families"] = json::array();
      for (const auto& f : pr.problem.family) j["families"].push_back(family_json(f));
      j["runs"] = json::array();
      std::vector<double> disc;
      for (int n : md_n) {
        json run = report_json(distribution_md(pr, n, md_eps));
        run["n"] = n;
        disc.push_back(run["mean_abs_discrepancy"].get<double>());
        j["runs"].push_back(run);
      }
      bool decreasing = true;
      for (std::size_t k = 1; k < disc.size(); ++k) decreasing = decreasing && disc[k] < disc[k - 1];
      j["discrepancy_decreasing"] = decreasing;
      Sink sink(out_path, out);
      *sink << j.dump(2) << '\n';
    } else if (toep->parsed()) {
      const SymbolFn s = symbol_fn(symbol_kind_from_string(toe_kind), toe_p, toe_fam.get());
      const Eigen::MatrixXd T = toeplitz(toeplitz_spec(s), toe_m);
      Sink sink(out_path, out);
      if (toe_eig)
        write_eigs(*sink, eigenvalues_dense(T));
      else
        write_matrix(*sink, T);
    }
  } catch (const NumericalError& e) {
    err << "numerical failure: " << e.what() << '\n';
    return kNumerical;
  } catch (const ConstraintViolation& e) {
    err << "error: " << e.what() << '\n';
    return kInvalid;
  } catch (const ValidationError& e) {
    err << "error: " << e.what() << '\n';
    return kInvalid;
  } catch (const UsageError& e) {
    err << "error: " << e.what() << '\n';
    return kInvalid;
  } catch (const std::exception& e) {
    err << "failure: " << e.what() << '\n';
    return kNumerical;
  }
  return kOk;
}

}  // namespace gbspec::cli

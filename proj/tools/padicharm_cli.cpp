#include <CLI11.hpp>

#include <algorithm>
#include <chrono>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <sstream>

#include <omp.h>

#include "padicharm/abelian_factors.hpp"
#include "padicharm/fx_calculus.hpp"
#include "padicharm/g_distribution.hpp"
#include "padicharm/pvs_zeta.hpp"
#include "padicharm/symplectic.hpp"

using namespace padicharm;

namespace {

struct Params {
  int p = 3;
  int n = 1;
  int level = 1;
  int conductor = 0;
  long long index = -1;  // explicit character index at `level`, overrides conductor
  int k = 3;
  double tolerance = 1e-6;
  unsigned long long seed = 1;
  int samples = -1;
  int k_min = -3, k_max = 3;
  double s_re = 0.5, s_im = 0.0;
  int ell_max = 80;
  int psi = 1;
  std::string phi = "unit";
  std::string h = "";
  int a_val = 0;
  long long a_unit = 1;
  std::string out;
  std::string format = "json";
  std::string config;
  bool timings = false;
};

// config file keys override flags
void apply_config(Params& P) {
  if (P.config.empty()) return;
  std::ifstream in(P.config);
  if (!in) throw CLI::ValidationError("--config", "cannot open " + P.config);
  nlohmann::json j;
  try {
    in >> j;
  } catch (const std::exception& e) {
    throw CLI::ValidationError("--config", e.what());
  }
  auto take = [&](const char* key, auto& field) {
    if (j.contains(key)) field = j.at(key).get<std::decay_t<decltype(field)>>();
  };
  take("p", P.p);
  take("n", P.n);
  take("level", P.level);
  take("conductor", P.conductor);
  take("index", P.index);
  take("k", P.k);
  take("tolerance", P.tolerance);
  take("seed", P.seed);
  take("samples", P.samples);
  take("k_min", P.k_min);
  take("k_max", P.k_max);
  take("s_re", P.s_re);
  take("s_im", P.s_im);
  take("ell_max", P.ell_max);
  take("psi", P.psi);
  take("phi", P.phi);
  take("h", P.h);
  take("a_val", P.a_val);
  take("a_unit", P.a_unit);
  take("format", P.format);
  take("out", P.out);
}

nlohmann::json params_json(const Params& P) {
  nlohmann::json j;
  j["p"] = P.p;
  j["n"] = P.n;
  j["level"] = P.level;
  j["conductor"] = P.conductor;
  j["index"] = P.index;
  j["k"] = P.k;
  j["tolerance"] = P.tolerance;
  j["seed"] = P.seed;
  j["psi"] = P.psi;
  return j;
}

UnitCharacter pick_character(const Params& P) {
  if (P.index >= 0) return UnitCharacter(P.p, P.level, P.index);
  if (P.conductor == 0) return UnitCharacter::trivial(P.p);
  return character_with_conductor(P.p, P.conductor);
}

RationalMatrix parse_matrix(const std::string& s) {
  // rows separated by ';' or '|', entries by ',' (rationals allowed: 1/2)
  std::vector<std::vector<mpq_class>> rows;
  std::string t = s;
  std::replace(t.begin(), t.end(), '|', ';');
  std::stringstream rs(t);
  std::string row;
  while (std::getline(rs, row, ';')) {
    std::vector<mpq_class> r;
    std::stringstream es(row);
    std::string e;
    while (std::getline(es, e, ',')) {
      mpq_class v(e);
      v.canonicalize();
      r.push_back(v);
    }
    rows.push_back(r);
  }
  if (rows.empty()) return RationalMatrix(0, 0);
  RationalMatrix M(rows.size(), rows[0].size());
  for (size_t i = 0; i < rows.size(); ++i) {
    if (rows[i].size() != rows[0].size()) throw std::invalid_argument("ragged matrix " + s);
    for (size_t j = 0; j < rows[i].size(); ++j) M(i, j) = rows[i][j];
  }
  return M;
}

LatticeTestFunction pick_lattice(const Params& P) {
  int m = 2 * P.n + 1;
  if (P.phi == "unit") return LatticeTestFunction::unit_lattice(m, P.p);
  if (P.phi == "dilated") return LatticeTestFunction::coset(m, P.p, RationalMatrix::zero(m, m), 1);
  if (P.phi == "shifted") {
    RationalMatrix D = RationalMatrix::zero(m, m);
    D(0, 0) = 1;
    return LatticeTestFunction::coset(m, P.p, D, 1);
  }
  throw std::invalid_argument("unknown --phi " + P.phi + " (unit|shifted|dilated)");
}

class Timer {
 public:
  explicit Timer(bool on) : on_(on), t0_(std::chrono::steady_clock::now()) {}
  double seconds() const {
    return on_ ? std::chrono::duration<double>(std::chrono::steady_clock::now() - t0_).count() : 0.0;
  }

 private:
  bool on_;
  std::chrono::steady_clock::time_point t0_;
};

CheckReport make_check(const std::string& name, double dev, double tol, const std::string& detail, double t) {
  CheckReport c;
  c.name = name;
  c.max_deviation = dev;
  c.pass = dev < tol;
  c.detail = detail;
  c.runtime_s = t;
  return c;
}

// verbs

void run_gamma(const Params& P, RunReport& R) {
  auto chi = pick_character(P);
  R.artifacts["chi"] = chi.to_json();
  R.artifacts["factor"] = "gamma";
  R.artifacts["result"] = gamma_factor(chi, P.psi).to_json();
}

void run_beta(const Params& P, RunReport& R) {
  auto chi = pick_character(P);
  R.artifacts["chi"] = chi.to_json();
  R.artifacts["factor"] = "beta";
  R.artifacts["result"] = beta_factor(P.n, chi, P.psi).to_json();
}

void run_eta_table(const Params& P, RunReport& R) {
  int L = P.level;
  for (int k = P.k_min; k <= P.k_max; ++k) L = std::max(L, eta_required_level(P.n, k));
  auto G = unit_group(P.p, L);
  std::ostringstream csv;
  csv << "ord,unit,re,im\n";
  nlohmann::json rows = nlohmann::json::array();
  for (int k = P.k_min; k <= P.k_max; ++k)
    for (long long u : G->elements) {
      cplx v = eta_kernel(P.p, P.n, P.psi, k, u, L);
      rows.push_back({{"ord", k}, {"unit", u}, {"value", cplx_to_json(v)}});
      csv << k << "," << u << "," << v.real() << "," << v.imag() << "\n";
    }
  R.artifacts["level"] = L;
  R.artifacts["eta"] = rows;
  R.csv = csv.str();
}

void run_fe_gl1(const Params& P, RunReport& R) {
  Timer t(P.timings);
  auto chars = characters_up_to_conductor(P.p, std::max(P.conductor, 2));
  auto fam = n0_test_family(P.p);
  for (size_t i = 0; i < fam.size(); ++i) {
    Timer ti(P.timings);
    auto r = check_fe_gl1(fam[i], P.n, chars, P.psi);
    R.checks.push_back(make_check("fe-gl1 function " + std::to_string(i), r.max_deviation, P.tolerance,
                                  std::to_string(chars.size()) + " characters", ti.seconds()));
  }
}

void run_fe_pvs(const Params& P, RunReport& R) {
  Timer t(P.timings);
  auto phi = pick_lattice(P);
  std::vector<UnitCharacter> chars{UnitCharacter::trivial(P.p), UnitCharacter::quadratic(P.p)};
  auto rep = check_fe_pvs(phi, chars, P.k, P.tolerance);
  rep.runtime_s = t.seconds();
  R.checks.push_back(rep);
}

void run_count(const Params& P, RunReport& R) {
  auto T = det_fiber_counts(2 * P.n + 1, P.p, P.k);
  R.artifacts["fiber_counts"] = T.to_json();
  R.csv = T.to_csv();
}

void run_symplectic(const Params& P, RunReport& R) {
  int samples = P.samples > 0 ? P.samples : (P.n == 1 ? 100 : 20);
  for (auto c : symplectic_identity_suite(P.n, samples, P.seed)) {
    if (!P.timings) c.runtime_s = 0.0;
    R.checks.push_back(c);
  }
  R.artifacts["sp_order_formula"] = sp_order_formula(P.n, P.p).get_str();
  R.artifacts["c0"] = c0_constant(P.n, P.p).get_str();
  if (P.n == 1 && P.p <= 7) {
    long long b = sp_order_bruteforce(1, P.p);
    bool ok = mpz_class(static_cast<long>(b)) == sp_order_formula(1, P.p) && c0_constant(1, P.p) == c0_product(1, P.p);
    R.checks.push_back(make_check("sp-order", ok ? 0.0 : 1.0, 0.5, "brute force " + std::to_string(b), 0.0));
  }
}

void run_tate(const Params& P, RunReport& R) {
  Timer t(P.timings);
  auto chi = pick_character(P);
  cplx s(P.s_re, P.s_im);
  auto o = tate_gamma_oracle(chi, s, P.psi);
  cplx g = gamma_factor(chi, P.psi)(z_of_s(s, P.p));
  double rel = std::abs(o.ratio - g) / std::abs(g);
  R.artifacts["oracle"] = cplx_to_json(o.ratio);
  R.artifacts["gamma"] = cplx_to_json(g);
  R.artifacts["spread"] = o.spread;
  R.checks.push_back(make_check("tate-oracle", std::max(rel, o.spread), P.tolerance, chi.to_json().dump(), t.seconds()));
}

void run_fourier_n0(const Params& P, RunReport& R) {
  auto fam = n0_test_family(P.p);
  for (size_t i = 0; i < fam.size(); ++i) {
    Timer t(P.timings);
    auto r = check_fourier_n0(fam[i]);
    std::ostringstream d;
    d << "inversion " << r.inversion_dev << ", plancherel " << r.plancherel_dev << ", pv vs mellin "
      << r.pv_vs_mellin_dev;
    double dev = std::max(r.inversion_dev / 1e-6, r.plancherel_dev / 1e-4);
    auto c = make_check("fourier-n0 function " + std::to_string(i), dev, 1.0, d.str(), t.seconds());
    c.max_deviation = std::max(r.inversion_dev, r.plancherel_dev);
    R.checks.push_back(c);
  }
}

void run_shells(const Params& P, RunReport& R) {
  auto chi = pick_character(P);
  auto sc = shell_coefficients(chi, cplx(P.s_re, P.s_im), P.ell_max, P.psi);
  nlohmann::json rows = nlohmann::json::array();
  std::ostringstream csv;
  csv << "ell,re,im,partial_re,partial_im\n";
  for (size_t i = 0; i < sc.ell.size(); ++i) {
    rows.push_back({{"ell", sc.ell[i]}, {"f", cplx_to_json(sc.f[i])}, {"partial", cplx_to_json(sc.partial[i])}});
    csv << sc.ell[i] << "," << sc.f[i].real() << "," << sc.f[i].imag() << "," << sc.partial[i].real() << ","
        << sc.partial[i].imag() << "\n";
  }
  R.artifacts["shells"] = rows;
  R.artifacts["limit"] = cplx_to_json(sc.limit);
  R.artifacts["gamma"] = cplx_to_json(sc.gamma_abelian);
  R.csv = csv.str();
  R.checks.push_back(make_check("shell-sum", std::abs(sc.limit - sc.gamma_abelian), 1e-5, chi.to_json().dump(), 0.0));
}

void run_phi(const Params& P, RunReport& R) {
  RationalMatrix h = P.h.empty() ? RationalMatrix::identity(2 * P.n) : parse_matrix(P.h);
  int L = std::max(P.level, 6);
  GPoint g{PadicElement(P.p, P.a_val, mod_pos(P.a_unit, ipow(P.p, L)), L), h};
  R.artifacts["value"] = cplx_to_json(phi_rho_eval(g, P.n, L, P.psi));
}

}  // namespace

int main(int argc, char** argv) {
  if (const char* w = std::getenv("PADICHARM_WORKERS")) {
    int nw = std::atoi(w);
    if (nw > 0) omp_set_num_threads(nw);
  }

  Params P;
  CLI::App app{"p-adic harmonic analysis toolkit"};
  app.require_subcommand(1);
  app.fallthrough();
  app.add_option("--p", P.p, "residue characteristic (odd prime)");
  app.add_option("--n", P.n, "rank parameter n (Sp_2n, m = 2n + 1)");
  app.add_option("--level", P.level, "character / kernel level N");
  app.add_option("--conductor", P.conductor, "conductor of the character");
  app.add_option("--index", P.index, "explicit character index at --level");
  app.add_option("--k", P.k, "enumeration depth k");
  app.add_option("--tolerance", P.tolerance, "pass threshold");
  app.add_option("--seed", P.seed, "seed for randomized suites");
  app.add_option("--out", P.out, "write the report here instead of stdout");
  app.add_option("--format", P.format, "json or csv")->check(CLI::IsMember({"json", "csv"}));
  app.add_option("--config", P.config, "JSON file; its keys override flags");
  app.add_option("--psi", P.psi, "orientation of psi (1 or -1)")->check(CLI::IsMember({1, -1}));
  app.add_flag("--timings", P.timings, "record runtimes (reports are then not reproducible byte for byte)");

  std::string verb;
  auto add = [&](const std::string& name, const std::string& help) {
    auto* s = app.add_subcommand(name, help);
    s->callback([&verb, name] { verb = name; });
    return s;
  };
  add("gamma", "gamma(s, chi, psi) as a rational function of z = q^-s");
  add("beta", "beta_psi(chi_s) as a rational function of z");
  auto* eta = add("eta-table", "values of the kernel eta on shells");
  eta->add_option("--kmin", P.k_min);
  eta->add_option("--kmax", P.k_max);
  auto* verify = app.add_subcommand("verify", "functional-equation verifiers");
  verify->require_subcommand(1);
  auto* fe1 = verify->add_subcommand("fe-gl1", "GL1 functional equation on the test family");
  fe1->callback([&] { verb = "verify fe-gl1"; });
  auto* fep = verify->add_subcommand("fe-pvs", "prehomogeneous functional equation from fiber counts");
  fep->add_option("--phi", P.phi, "unit|shifted|dilated");
  fep->callback([&] { verb = "verify fe-pvs"; });
  add("count-fibers", "determinant fiber counts on S_m(Z/p^k)");
  auto* sym = add("symplectic-check", "exact symplectic identity suite");
  sym->add_option("--samples", P.samples);
  auto* tate = add("tate-oracle", "brute-force Tate integral ratio against gamma");
  tate->add_option("--s-re", P.s_re);
  tate->add_option("--s-im", P.s_im);
  add("fourier-n0", "inversion and Plancherel for the n = 0 Fourier operator");
  auto* sh = add("shells", "shell Fourier coefficients of Phi at n = 0");
  sh->add_option("--s-re", P.s_re);
  sh->add_option("--s-im", P.s_im);
  sh->add_option("--ell-max", P.ell_max);
  auto* phi = app.add_subcommand("phi", "evaluate Phi on G");
  phi->require_subcommand(1);
  auto* ev = phi->add_subcommand("eval", "Phi(a, h)");
  ev->add_option("--a-val", P.a_val, "valuation of a");
  ev->add_option("--a-unit", P.a_unit, "unit part of a");
  ev->add_option("--matrix", P.h, "symplectic matrix, rows separated by ';' or '|'");
  ev->callback([&] { verb = "phi eval"; });

  try {
    app.parse(argc, argv);
    apply_config(P);
    LocalFieldConfig cfg;
    cfg.p = P.p;
    cfg.default_level = P.level;
    cfg.validate();
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "usage error: " << e.what() << "\n";
    return 2;
  }

  RunReport R;
  R.command = verb;
  R.parameters = params_json(P);
  try {
    if (verb == "gamma") run_gamma(P, R);
    else if (verb == "beta") run_beta(P, R);
    else if (verb == "eta-table") run_eta_table(P, R);
    else if (verb == "verify fe-gl1") run_fe_gl1(P, R);
    else if (verb == "verify fe-pvs") run_fe_pvs(P, R);
    else if (verb == "count-fibers") run_count(P, R);
    else if (verb == "symplectic-check") run_symplectic(P, R);
    else if (verb == "tate-oracle") run_tate(P, R);
    else if (verb == "fourier-n0") run_fourier_n0(P, R);
    else if (verb == "shells") run_shells(P, R);
    else if (verb == "phi eval") run_phi(P, R);
  } catch (const std::exception& e) {
    CheckReport c;
    c.name = verb;
    c.error = true;
    c.detail = e.what();
    R.checks.push_back(c);
  }

  std::string text;
  try {
    text = P.format == "csv" ? emit_csv(R) : emit_json(R) + "\n";
  } catch (const std::invalid_argument& e) {
    std::cerr << e.what() << "\n";
    return 2;
  }
  if (P.out.empty()) {
    std::cout << text;
  } else {
    std::ofstream o(P.out);
    if (!o) {
      std::cerr << "cannot write " << P.out << "\n";
      return 2;
    }
    o << text;
  }
  return R.all_pass() ? 0 : 1;
}

// command-line front end: normal ordering, state expectations, CSV tables
// of the closed-form characteristic functions and densities, and the
// numerical verification suites.

#include <fstream>
#include <iostream>
#include <sstream>

#include "CLI11.hpp"
#include "json.hpp"

#include "dfa/parser.hpp"
#include "dfa/tables.hpp"
#include "dfa/verify.hpp"

namespace {

using namespace dfa;

std::string read_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

ModelContext<Complex> load_model(const std::string& path) {
  return parse_model(read_file(path));
}

std::string join(const std::vector<std::string>& parts) {
  std::string s;
  for (const auto& p : parts) {
    if (!s.empty()) s += ' ';
    s += p;
  }
  return s;
}

std::string format_complex(Complex z) {
  std::string s = format_sig17(z.real());
  if (z.imag() != 0) {
    s += (z.imag() < 0 ? "-" : "+");
    s += format_sig17(std::abs(z.imag()));
    s += "i";
  }
  return s;
}

void emit(const std::string& out_path, const std::string& text) {
  if (out_path.empty()) {
    std::cout << text;
    return;
  }
  std::ofstream out(out_path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot write " + out_path);
  out << text;
}

int cmd_normal_order(const std::string& model_path,
                     const std::vector<std::string>& expr_parts,
                     const std::string& out_path) {
  auto model = load_model(model_path);
  auto p = elaborate(parse_expr(join(expr_parts)), model);
  emit(out_path, format_canonical(p, model) + "\n");
  return 0;
}

int cmd_expect(const std::string& model_path,
               const std::vector<std::string>& expr_parts,
               const std::string& state_spec, int order,
               const std::string& out_path) {
  auto model = load_model(model_path);
  auto field = elaborate(parse_expr(join(expr_parts)), model);
  StateFunctional<Complex> state =
      state_spec == "vacuum"
          ? StateFunctional<Complex>::vacuum()
          : StateFunctional<Complex>::conjugated(
                elaborate(parse_expr(state_spec), model), model);
  auto r = moment(state, field, order, model);
  if (r.hermitian_warning)
    std::cerr << "note: expression is not Hermitian, result may be complex\n";
  emit(out_path, format_complex(r.value) + "\n");
  return 0;
}

int cmd_table(const std::string& family, const std::string& deformation,
              double ff, double zf, const std::vector<double>& alphas,
              const std::vector<int>& ks, const std::string& grid_spec,
              const std::string& out_path) {
  const Grid grid = parse_grid(grid_spec);
  Table t;
  if (family == "density") {
    if (deformation == "defI") {
      t = density_table_defI(ff, alphas, grid);
    } else if (deformation == "defII") {
      t = density_table_defII(ff, ks.empty() ? std::vector<int>{1} : ks, grid);
    } else {
      throw TableError("density tables support deformations defI and defII");
    }
  } else if (family == "char") {
    std::vector<std::pair<std::string, CharFn>> series;
    if (deformation == "free") {
      series.emplace_back("free", [=](double l) { return char_free(l, ff); });
    } else if (deformation == "displaced") {
      series.emplace_back("displaced",
                          [=](double l) { return char_displaced(l, ff, zf); });
    } else if (deformation == "defI") {
      for (double a : alphas)
        series.emplace_back("defI_alpha=" + table_detail::short_num(a),
                            [=](double l) { return char_defI(l, ff, std::abs(a)); });
    } else if (deformation == "defI-power") {
      const Complex alpha(alphas.empty() ? 1.0 : alphas.front(), 0);
      for (int k : ks)
        series.emplace_back(
            "defI_k=" + std::to_string(k),
            [=](double l) { return char_defI_power(l, ff, alpha, k); });
    } else if (deformation == "defII") {
      for (int k : ks.empty() ? std::vector<int>{1} : ks)
        series.emplace_back("defII_k=" + std::to_string(k), [=](double l) {
          return char_defII_power(l, ff, k);
        });
    } else {
      throw TableError("unknown deformation: " + deformation);
    }
    if (series.empty()) throw TableError("no series selected, pass --alpha or --k");
    t = char_table(series, grid);
  } else {
    throw TableError("family must be char or density");
  }
  std::ostringstream csv;
  write_csv(t, csv);
  emit(out_path, csv.str());
  return 0;
}

int cmd_verify(const std::string& suite, const std::string& model_path,
               double tol, const std::string& out_path) {
  auto model = model_path.empty() ? make_simple_model<Complex>(1.0, 0.5)
                                  : load_model(model_path);
  auto reports = run_suites(suite, model, tol);

  nlohmann::json j;
  j["suites"] = nlohmann::json::array();
  bool all_passed = true;
  for (const auto& r : reports) {
    nlohmann::json js;
    js["name"] = r.suite;
    js["passed"] = r.passed();
    js["checks"] = nlohmann::json::array();
    for (const auto& c : r.checks) {
      js["checks"].push_back({{"name", c.name},
                              {"pass", c.pass},
                              {"residual", c.residual},
                              {"detail", c.detail}});
      std::cout << (c.pass ? "ok   " : "FAIL ") << r.suite << "." << c.name
                << "  residual=" << c.residual
                << (c.detail.empty() ? "" : "  " + c.detail) << "\n";
    }
    all_passed = all_passed && r.passed();
  }
  j["passed"] = all_passed;
  if (!out_path.empty()) emit(out_path, j.dump(2) + "\n");
  std::cout << (all_passed ? "all suites passed" : "verification FAILED") << "\n";
  return all_passed ? 0 : 1;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"deformed free-field algebra toolkit"};
  app.require_subcommand(1);

  std::string model_path, out_path, state_spec = "vacuum";
  std::string grid_spec = "-5:5:200", family = "density", deformation = "defII";
  std::string suite = "all";
  std::vector<std::string> expr_parts;
  std::vector<double> alphas;
  std::vector<int> ks;
  double ff = 1.0, zf = 0.5, tol = 1e-9;
  int order = 1;

  auto* no = app.add_subcommand("normal-order",
                                "rewrite an expression into canonical form");
  no->add_option("expr", expr_parts, "expression")->required();
  no->add_option("--model", model_path, "model JSON file")->required();
  no->add_option("--out", out_path, "output file (default stdout)");

  auto* ex = app.add_subcommand("expect", "expectation in a chosen state");
  ex->add_option("expr", expr_parts, "expression")->required();
  ex->add_option("--model", model_path, "model JSON file")->required();
  ex->add_option("--state", state_spec,
                 "\"vacuum\" or a displacement-only conjugation expression");
  ex->add_option("--order", order, "moment order")->check(CLI::Range(0, 20));
  ex->add_option("--out", out_path, "output file (default stdout)");

  auto* tb = app.add_subcommand("table", "sample closed forms into CSV");
  tb->add_option("--family", family, "char or density");
  tb->add_option("--deformation", deformation,
                 "free, displaced, defI, defI-power, defII");
  tb->add_option("--ff", ff, "inner product (f,f)");
  tb->add_option("--zf", zf, "zeta(f)");
  tb->add_option("--alpha", alphas, "alpha values")->delimiter(',');
  tb->add_option("--k", ks, "deformation powers")->delimiter(',');
  tb->add_option("--grid", grid_spec, "MIN:MAX:STEPS");
  tb->add_option("--out", out_path, "output CSV file (default stdout)");

  auto* vf = app.add_subcommand("verify", "run numerical verification suites");
  vf->add_option("--suite", suite,
                 "algebra, positivity, bch, charfunc, fourier, tails, all");
  vf->add_option("--model", model_path, "model JSON for the positivity suite");
  vf->add_option("--tol", tol, "positivity eigenvalue tolerance");
  vf->add_option("--out", out_path, "JSON report file");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? 0 : 2;
  }

  try {
    if (no->parsed()) return cmd_normal_order(model_path, expr_parts, out_path);
    if (ex->parsed())
      return cmd_expect(model_path, expr_parts, state_spec, order, out_path);
    if (tb->parsed())
      return cmd_table(family, deformation, ff, zf, alphas, ks, grid_spec,
                       out_path);
    return cmd_verify(suite, model_path, tol, out_path);
  } catch (const NonConvergenceError& e) {
    std::cerr << "numerical failure: " << e.what() << "\n";
    return 3;
  } catch (const QuadratureError& e) {
    std::cerr << "numerical failure: " << e.what() << "\n";
    return 3;
  } catch (const ResourceError& e) {
    std::cerr << "resource limit: " << e.what() << "\n";
    return 3;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  }
}

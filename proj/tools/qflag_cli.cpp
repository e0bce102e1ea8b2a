#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "qflag/qflag.hpp"

namespace {

std::vector<std::string> split(const std::string& s, char sep) {
  std::vector<std::string> out;
  std::stringstream ss(s);
  std::string item;
  while (std::getline(ss, item, sep)) {
    if (!item.empty()) out.push_back(item);
  }
  return out;
}

std::vector<int> parse_indices(const std::string& s) {
  std::vector<int> out;
  for (const auto& t : split(s, ',')) out.push_back(std::stoi(t));
  return out;
}

struct Options {
  std::string type = "A";
  int rank = 1;
  std::string subset;
  std::string q = "1/2,2/3,3/5";
  std::string weight;
  long cap = 4096;
  long cyclic_cap = 20000;
  unsigned seed = 1;
  int samples = 3;
  std::string out;
  bool no_timing = false;
};

qflag::CaseConfig make_config(const Options& o) {
  qflag::CaseConfig c;
  if (o.type.size() != 1) throw std::invalid_argument("type must be a single letter");
  c.type = o.type[0];
  c.rank = o.rank;
  for (int i : parse_indices(o.subset)) c.subset.push_back(i - 1);
  if (o.q == "symbolic") {
    c.symbolic = true;
    c.qs.clear();
  } else {
    c.qs.clear();
    for (const auto& t : split(o.q, ',')) c.qs.push_back(qflag::parse_rational(t));
  }
  c.dim_cap = o.cap;
  c.cyclic_cap = o.cyclic_cap;
  c.seed = o.seed;
  c.cocycle_samples = o.samples;
  c.validate();
  return c;
}

// The report subcommand without --out sends the structured report to stdout
// and the summary to stderr.
int finish(const qflag::Report& r, const Options& o, bool report_to_stdout) {
  if (report_to_stdout) {
    std::cerr << qflag::report_summary(r);
    std::cout << qflag::report_text(r, !o.no_timing);
  } else {
    std::cout << qflag::report_summary(r);
    if (!o.out.empty()) qflag::write_report(r, o.out, !o.no_timing);
  }
  return r.passed() ? 0 : 1;
}

template <class Field>
void dump_module(const qflag::RootSystem& rs, const std::vector<int>& lambda, const Field& f, long cap) {
  qflag::HWModule<Field> m(rs, lambda, f, cap);
  std::cout << m.dump();
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Exact verification of twisted Hochschild classes on quantum flag manifolds"};
  app.set_config("--config", "", "Read options from a TOML/INI file");
  Options o;
  app.add_option("--type", o.type, "Type letter (A, B, C, D, F, G)");
  app.add_option("--rank", o.rank, "Rank");
  app.add_option("--subset", o.subset, "Comma list of simple-root indices in S (1-based; empty for the full flag)");
  app.add_option("--q", o.q, "Comma list of rational q in (0,1), or 'symbolic'");
  app.add_option("--weight", o.weight, "Highest weight for 'rep' (comma list; default rho_S)");
  app.add_option("--cap", o.cap, "Module dimension cap");
  app.add_option("--cyclic-cap", o.cyclic_cap, "Cyclic-module dimension cap for zero tests");
  app.add_option("--seed", o.seed, "Seed for sampled cocycle chains");
  app.add_option("--samples", o.samples, "Number of sampled cocycle chains");
  app.add_option("--out", o.out, "Report output path");
  app.add_flag("--no-timing", o.no_timing, "Omit wall-clock fields from the report");
  app.require_subcommand(1);

  auto* roots = app.add_subcommand("roots", "Print root data")->fallthrough();
  auto* rep = app.add_subcommand("rep", "Print a highest-weight module")->fallthrough();
  app.add_subcommand("verify", "Run the full suite and print a summary")->fallthrough();
  auto* pairing = app.add_subcommand("pairing", "Run the pairing checks only")->fallthrough();
  auto* kahler = app.add_subcommand("kahler", "Run the classical Kahler block only")->fallthrough();
  auto* report = app.add_subcommand("report", "Run the full suite and emit the structured report")->fallthrough();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    return app.exit(e) == 0 ? 0 : 2;
  }

  try {
    qflag::CaseConfig cfg = make_config(o);
    qflag::RootSystem rs(cfg.type, cfg.rank);
    qflag::ParabolicData pd = qflag::parabolic(rs, cfg.subset);
    if (*roots) {
      std::cout << qflag::roots_text(rs);
      return 0;
    }
    if (*rep) {
      std::vector<int> lambda = o.weight.empty() ? pd.rho_S : parse_indices(o.weight);
      if (cfg.symbolic) {
        dump_module(rs, lambda, qflag::SymbolicField{}, cfg.dim_cap);
      } else {
        dump_module(rs, lambda, qflag::EvaluatedField(cfg.qs.front()), cfg.dim_cap);
      }
      return 0;
    }
    if (*pairing || *kahler) {
      bool p = static_cast<bool>(*pairing);
      cfg.run_quantum = p;
      cfg.run_projection = cfg.run_invariance = cfg.run_matrix_units = cfg.run_modular = false;
      cfg.run_cycle = cfg.run_cocycle = false;
      cfg.run_pairing = p;
      cfg.run_classical = !p;
    }
    qflag::Report r = qflag::run_suite(cfg);
    return finish(r, o, static_cast<bool>(*report) && o.out.empty());
  } catch (const std::invalid_argument& e) {
    std::cerr << "configuration error: " << e.what() << "\n";
    return 2;
  } catch (const std::out_of_range& e) {
    std::cerr << "configuration error: " << e.what() << "\n";
    return 2;
  } catch (const std::runtime_error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 3;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 3;
  }
}

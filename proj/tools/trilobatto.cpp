// Command-line front end: construct, verify, bounds, plot, export.

#include <cstdint>
#include <cstdlib>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "trilobatto/trilobatto.hpp"

namespace {

using namespace trilobatto;

constexpr int exit_ok = 0;
constexpr int exit_failed = 1;
constexpr int exit_usage = 2;

double default_tolerance() {
  if (const char* env = std::getenv("TRILOBATTO_TOL")) {
    try {
      std::size_t used = 0;
      const double v = std::stod(env, &used);
      if (used > 0 && v > 0.0) return v;
    } catch (const std::exception&) {
    }
    std::cerr << "warning: ignoring invalid TRILOBATTO_TOL=" << env << "\n";
  }
  return tol::verify;
}

int exit_for(const Error& e) {
  return e.kind() == ErrorKind::parse ? exit_usage : exit_failed;
}

void report_error(const Error& e, bool as_json) {
  if (as_json) {
    io::Json j{{"error", std::string(to_string(e.kind()))}, {"message", e.what()}};
    std::cout << j.dump() << "\n";
  }
  std::cerr << "error (" << to_string(e.kind()) << "): " << e.what() << "\n";
}

std::string census_line(const NodeCensus& c) {
  std::ostringstream os;
  os << "nodes " << c.total() << ": interior " << c.n0 << ", edges " << c.n1 << "/" << c.n2
     << "/" << c.n3 << ", corners " << c.corners;
  return os.str();
}

// ---------------------------------------------------------------------------

struct ConstructArgs {
  int precision = 5;
  JacobiExponents weight;
  bool symmetric = false;
  bool even = false;
  double fixed_node = 0.5;
  std::uint64_t seed = 0;
  int nodes = 0;
  std::vector<int> orbits;
  std::string interior_rule;
  std::string output;
  std::optional<double> tolerance;
  int attempts = 1000;
  bool error_json = false;
};

int run_construct(const ConstructArgs& a) {
  const double tolerance = a.tolerance.value_or(default_tolerance());
  try {
    ConstructOptions o;
    o.precision = a.precision;
    o.weight = a.weight;
    o.symmetric = a.symmetric;
    o.even = a.even;
    o.fixed_node = a.fixed_node;
    o.seed = a.seed;
    o.interior_nodes = a.nodes;
    o.tolerance = tolerance;
    o.attempts = a.attempts;
    if (!a.orbits.empty()) {
      if (a.orbits.size() != 3) fail(ErrorKind::parameter, "--orbits takes center,median,generic");
      o.orbits = OrbitLayout{a.orbits[0], a.orbits[1], a.orbits[2]};
    }
    const TriangleRule rule = a.interior_rule.empty()
                                  ? construct(o)
                                  : construct(o, io::read_interior_rule(a.interior_rule));

    const AuditReport rep = audit(rule, tolerance);
    if (!a.output.empty()) io::write_file(a.output, io::dump(io::to_json(rule)));

    std::cout << "precision " << rule.precision << ", " << census_line(rep.census) << "\n";
    std::cout << "weights: " << rep.nonpositive_weights << " nonpositive\n";
    std::cout << "max relative error " << rep.exactness.max_error << " (tolerance "
              << tolerance << ")\n";
    if (rule.meta.seed) std::cout << "seed " << *rule.meta.seed << "\n";
    if (!rep.conforming) {
      std::cout << "warning: rule is non-conforming (needs positive weights on interior, "
                   "edge and corner nodes)\n";
    }
    if (a.output.empty()) std::cout << io::dump(io::to_json(rule));
    return exit_ok;
  } catch (const Error& e) {
    report_error(e, a.error_json);
    return exit_for(e);
  }
}

// ---------------------------------------------------------------------------

int run_verify(const std::string& path, std::optional<int> degree,
               std::optional<double> tolerance_flag, bool direct_sum) {
  const double tolerance = tolerance_flag.value_or(default_tolerance());
  try {
    const TriangleRule rule = io::read_rule(path);
    const AuditReport rep = audit(rule, tolerance);
    const int through = degree.value_or(rule.precision);
    const ExactnessReport ex =
        degree ? verify_exactness(rule, through, tolerance) : rep.exactness;

    std::cout << "weight " << describe(rule.weight) << ", claimed precision "
              << rule.precision << "\n";
    std::cout << census_line(rep.census) << "\n";
    for (const auto& o : rep.census.offenders) std::cout << "  misplaced: " << o << "\n";
    std::cout << "exactness through degree " << through << ": max relative error "
              << ex.max_error << " (x^" << ex.worst.i << " y^" << ex.worst.j << ") "
              << (ex.pass ? "PASS" : "FAIL") << "\n";
    std::cout << "weights: " << (rep.all_weights_positive ? "all positive" : "not all positive")
              << " (" << rep.nonpositive_weights << " nonpositive)\n";
    std::cout << "bounds: " << (rep.feasibility.feasible() ? "consistent" : "violated");
    for (const auto& v : rep.feasibility.violations()) {
      std::cout << "; " << v.inequality << " has " << v.lhs;
    }
    std::cout << "\n";
    if (direct_sum) {
      for (const auto& s : verify_direct_sum(rule, tolerance)) {
        std::cout << "summand " << s.name << ": max relative error " << s.max_error << " "
                  << (s.pass ? "PASS" : "FAIL") << "\n";
      }
    }
    std::cout << "verdict: " << (rep.conforming ? "conforming" : "non-conforming")
              << (rep.gauss_lobatto ? ", Gauss-Lobatto" : "") << "\n";
    if (!ex.pass) std::cout << "max error " << ex.max_error << " exceeds " << tolerance << "\n";
    return rep.conforming && ex.pass ? exit_ok : exit_failed;
  } catch (const Error& e) {
    report_error(e, false);
    return exit_for(e);
  }
}

// ---------------------------------------------------------------------------

void print_bounds(int s) {
  std::cout << "s=" << s << ": N >= " << minimal_lower_bound(s);
  if (s >= 3) {
    std::cout << ", N0 >= " << interior_lower_bound(s) << ", N0+Ni >= "
              << interior_plus_edge_lower_bound(s);
  }
  if (s % 2 == 1 && s >= 3) {
    const int n = (s + 1) / 2;
    const FeasibilityReport strict = check_feasibility(strict_gauss_lobatto_budget(n));
    std::cout << ", strict Gauss-Lobatto (N0=" << strict.budget.n0 << ", Ni=" << n - 1
              << ") " << (strict.feasible() ? "feasible" : "infeasible");
    for (const auto& v : strict.violations()) std::cout << " [violates " << v.inequality << "]";
  }
  std::cout << "\n";
}

int run_bounds(std::optional<int> s, int from, int to) {
  if (s) {
    if (*s < 1) {
      std::cerr << "error: --s must be >= 1\n";
      return exit_usage;
    }
    print_bounds(*s);
    return exit_ok;
  }
  if (from < 1 || to < from) {
    std::cerr << "error: need 1 <= --from <= --to\n";
    return exit_usage;
  }
  for (int k = from; k <= to; ++k) print_bounds(k);
  return exit_ok;
}

int run_render(const std::string& path, const std::string& output, bool svg) {
  try {
    const TriangleRule rule = io::read_rule(path);
    const std::string text = svg ? io::to_svg(rule) : io::to_csv(rule);
    if (output.empty()) {
      std::cout << text;
    } else {
      io::write_file(output, text);
    }
    return exit_ok;
  } catch (const Error& e) {
    report_error(e, false);
    return exit_for(e);
  }
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Lobatto-type cubature rules on the triangle"};
  app.require_subcommand(1);

  ConstructArgs ca;
  auto* construct = app.add_subcommand("construct", "build a rule with boundary nodes");
  construct->add_option("--precision,-s", ca.precision, "degree of exactness")->required();
  construct->add_option("--alpha", ca.weight.alpha, "exponent of x");
  construct->add_option("--beta", ca.weight.beta, "exponent of y");
  construct->add_option("--gamma", ca.weight.gamma, "exponent of 1-x-y");
  construct->add_flag("--symmetric", ca.symmetric, "solve for a permutation-invariant rule");
  construct->add_flag("--even", ca.even, "even precision 2n via quasi-orthogonal edges");
  construct->add_option("--fixed-node", ca.fixed_node, "edge node fixed by --even");
  construct->add_option("--seed", ca.seed, "first seed of the multi-start solver");
  construct->add_option("--nodes", ca.nodes, "interior node count (default: the lower bound)");
  construct->add_option("--orbits", ca.orbits, "symmetric layout: center,median,generic")
      ->delimiter(',')
      ->expected(3);
  construct->add_option("--interior-rule", ca.interior_rule, "interior rule file to use");
  construct->add_option("--output,-o", ca.output, "rule file to write");
  construct->add_option("--tol", ca.tolerance, "verification tolerance");
  construct->add_option("--attempts", ca.attempts, "interior rules tried before giving up");
  construct->add_flag("--error-json", ca.error_json, "print errors as JSON on stdout");

  std::string verify_path;
  std::optional<int> verify_degree;
  std::optional<double> verify_tol;
  bool direct_sum = false;
  auto* verify = app.add_subcommand("verify", "audit a rule file");
  verify->add_option("rule", verify_path, "rule file")->required();
  verify->add_option("--degree", verify_degree, "check exactness through this degree");
  verify->add_option("--tol", verify_tol, "relative tolerance");
  verify->add_flag("--direct-sum", direct_sum, "also check each summand of the decomposition");

  std::optional<int> bounds_s;
  int bounds_from = 1;
  int bounds_to = 15;
  auto* bounds = app.add_subcommand("bounds", "node-count lower bounds");
  bounds->add_option("--s", bounds_s, "single precision");
  bounds->add_option("--from", bounds_from, "first precision of a range");
  bounds->add_option("--to", bounds_to, "last precision of a range");

  std::string plot_path;
  std::string plot_out;
  auto* plot = app.add_subcommand("plot", "draw the nodes of a rule as SVG");
  plot->add_option("rule", plot_path, "rule file")->required();
  plot->add_option("--output,-o", plot_out, "SVG file (default stdout)");

  std::string export_path;
  std::string export_out;
  auto* exp = app.add_subcommand("export", "flatten a rule to CSV");
  exp->add_option("rule", export_path, "rule file")->required();
  exp->add_option("--output,-o", export_out, "CSV file (default stdout)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return exit_usage;
  }

  if (*construct) return run_construct(ca);
  if (*verify) return run_verify(verify_path, verify_degree, verify_tol, direct_sum);
  if (*bounds) return run_bounds(bounds_s, bounds_from, bounds_to);
  if (*plot) return run_render(plot_path, plot_out, true);
  if (*exp) return run_render(export_path, export_out, false);
  return exit_usage;
}

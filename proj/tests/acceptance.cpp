// Acceptance suite: one PASS/FAIL line per criterion, nonzero exit if any
// criterion fails.

#include <sys/wait.h>

#include <array>
#include <chrono>
#include <filesystem>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <functional>
#include <iostream>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "example1_polynomials.hpp"
#include "trilobatto/trilobatto.hpp"

using namespace trilobatto;

namespace {

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point t0) {
  return std::chrono::duration<double>(Clock::now() - t0).count();
}

struct Outcome {
  bool pass = false;
  std::string detail;
};

std::string num(double v) {
  std::ostringstream os;
  os.precision(3);
  os << v;
  return os.str();
}

struct ShellRun {
  int code = -1;
  std::string out;
};

ShellRun shell(const std::string& args) {
  const std::string cmd = std::string(TRILOBATTO_CLI) + " " + args + " 2>/dev/null";
  ShellRun r;
  FILE* pipe = popen(cmd.c_str(), "r");
  if (!pipe) return r;
  std::array<char, 4096> buf{};
  while (std::fgets(buf.data(), static_cast<int>(buf.size()), pipe)) r.out += buf.data();
  const int status = pclose(pipe);
  r.code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
  return r;
}

std::string slurp(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

/// Largest distance between an expected weighted node and the closest node
/// of the same class in the rule (position and weight errors combined as
/// max(|dx|, |dy|, |dw|)). Both sides must have the same size.
struct Expected {
  std::vector<WeightedPoint> interior;
  std::array<std::vector<EdgeNode>, 3> edges;
  std::array<double, 3> corners{};
};

double match_error(const TriangleRule& r, const Expected& e) {
  double worst = 0.0;
  if (r.interior.size() != e.interior.size()) return INFINITY;
  for (const auto& want : e.interior) {
    double best = INFINITY;
    for (const auto& got : r.interior) {
      best = std::min(best, std::max({std::abs(got.point.x - want.point.x),
                                      std::abs(got.point.y - want.point.y),
                                      std::abs(got.weight - want.weight)}));
    }
    worst = std::max(worst, best);
  }
  for (std::size_t k = 0; k < 3; ++k) {
    if (r.edges[k].size() != e.edges[k].size()) return INFINITY;
    for (const auto& want : e.edges[k]) {
      double best = INFINITY;
      for (const auto& got : r.edges[k]) {
        best = std::min(best, std::max(std::abs(got.t - want.t), std::abs(got.weight - want.weight)));
      }
      worst = std::max(worst, best);
    }
    worst = std::max(worst, std::abs(r.corners[k] - e.corners[k]));
  }
  return worst;
}

std::vector<TriangleRule> constructed;  // every rule built here, for criterion 6

// ---------------------------------------------------------------------------

Outcome example_one() {
  const auto t0 = Clock::now();
  const auto nodes = common_zeros(samples::example1_polynomials(), 3);
  const InteriorRule step1 = weights_from_nodes(nodes, 2, {1, 1, 1});
  const TriangleRule r = build_lobatto(step1, {});
  const double elapsed = seconds_since(t0);
  constructed.push_back(r);

  Expected e;
  e.interior = {{{0.15881702219143, 0.19201873632215}, 0.101342396527698},
                {{0.56219234596964, 0.19201873632215}, 0.117181247909596},
                {{0.22100936816107, 0.55798126367785}, 0.118066904793533}};
  e.edges[0] = {{0.3931870086016, 0.02991955921794}, {0.8595419130359, 0.01756588222187}};
  e.edges[1] = {{0.4305843026985, 0.02290932968619}, {0.7924406473476, 0.02022650113138}};
  e.edges[2] = {{0.2629899118578, 0.02514330117112}, {0.7030163143652, 0.03109870484395}};
  e.corners = {0.0081170837035, 0.00326155091683, 0.00516753787639};
  const double err = match_error(r, e);
  return {err <= 1e-10 && elapsed < 1.0 && r.node_count() == 12,
          "max abs deviation " + num(err) + " over 12 nodes/weights, " + num(elapsed) + " s"};
}

Outcome orthogonal_coefficients() {
  const InteriorRule step1 =
      weights_from_nodes(common_zeros(samples::example1_polynomials(), 3), 2, {1, 1, 1});
  const double r = std::sqrt(105.0);
  const std::array<std::array<double, 2>, 3> want{{
      {(889 + 61 * r) / 4480, (-469 - 9 * r) / 448},
      {3 * (63 + r) / 644, 3 * (-29 + r) / 46},
      {(665 - 9 * r) / 3098, (-10997 + 51 * r) / 10843},
  }};
  double worst = 0.0;
  for (const EdgeLabel e : all_edges) {
    const MonicPoly p = orthogonal_polynomials(boundary_functional(step1, {}, e, 4), 2)[2];
    for (std::size_t k = 0; k < 2; ++k) {
      const double w = want[index_of(e)][k];
      worst = std::max(worst, std::abs(p.coeffs[k] - w) / std::abs(w));
    }
  }
  return {worst <= 1e-12, "max relative coefficient error " + num(worst)};
}

Expected symmetric_expected(const std::vector<std::pair<double, double>>& median_orbits,
                            const std::vector<std::pair<double, double>>& edge_orbits,
                            double corner) {
  Expected e;
  for (const auto& [u, a] : median_orbits) {
    for (const Point2 p : {Point2{u, u}, Point2{u, 1 - 2 * u}, Point2{1 - 2 * u, u}}) {
      e.interior.push_back({p, a});
    }
  }
  for (auto& edge : e.edges) {
    for (const auto& [t, b] : edge_orbits) edge.push_back({t, b});
  }
  e.corners = {corner, corner, corner};
  return e;
}

Outcome example_two() {
  ConstructOptions o;
  o.precision = 5;
  o.symmetric = true;
  o.seed = 7;
  const TriangleRule r = construct(o);
  constructed.push_back(r);
  const double s7 = std::sqrt(7.0);
  const double root = std::sqrt(21 * (4 * s7 - 7));
  const double b = (7 + 4 * s7) / 720;
  const Expected e = symmetric_expected({{(7 - s7) / 21, 7 * (14 - s7) / 720}},
                                        {{(21 - root) / 42, b}, {(21 + root) / 42, b}},
                                        (8 - s7) / 720);
  const double err = match_error(r, e);
  const ExactnessReport ex = verify_exactness(r, 5, 1e-10);
  return {err <= 1e-12 && ex.pass,
          "max deviation from closed forms " + num(err) + ", degree-5 error " + num(ex.max_error)};
}

Outcome example_three() {
  ConstructOptions o;
  o.precision = 7;
  o.symmetric = true;
  const TriangleRule r = construct(o);
  constructed.push_back(r);
  const double s7 = std::sqrt(7.0);
  const double s3 = std::sqrt(3.0);
  const Expected e = symmetric_expected(
      {{(5 - s7) / 18, (1141 - 94 * s7) / 17640}, {(5 + s7) / 18, (1141 + 94 * s7) / 17640}},
      {{(3 - s3) / 6, 3.0 / 280}, {0.5, 4.0 / 315}, {(3 + s3) / 6, 3.0 / 280}}, 1.0 / 315);
  const double err = match_error(r, e);
  const ExactnessReport ex = verify_exactness(r, 7, 1e-10);
  return {err <= 1e-12 && ex.pass && monomials_up_to(7).size() == 36,
          "max deviation from closed forms " + num(err) + ", degree-7 error over 36 monomials " +
              num(ex.max_error)};
}

Outcome bounds_sweep() {
  const ShellRun five = shell("bounds --s 5");
  const ShellRun seven = shell("bounds --s 7");
  bool ok = five.code == 0 && seven.code == 0 &&
            five.out.find("N >= 7,") != std::string::npos &&
            seven.out.find("N >= 12,") != std::string::npos;
  const auto t0 = Clock::now();
  const ShellRun sweep = shell("bounds --from 3 --to 99");
  int infeasible = 0;
  std::istringstream lines(sweep.out);
  for (std::string line; std::getline(lines, line);) {
    for (int n = 2; n <= 50; ++n) {
      if (line.rfind("s=" + std::to_string(2 * n - 1) + ":", 0) == 0 &&
          line.find("strict Gauss-Lobatto") != std::string::npos &&
          line.find("infeasible") != std::string::npos) {
        ++infeasible;
      }
    }
  }
  for (int n = 2; n <= 50; ++n) ok = ok && !check_feasibility(strict_gauss_lobatto_budget(n)).feasible();
  const double elapsed = seconds_since(t0);
  ok = ok && sweep.code == 0 && infeasible == 49 && elapsed < 1.0;
  return {ok, "minimal counts 7 and 12, strict Gauss-Lobatto infeasible for " +
                  std::to_string(infeasible) + "/49 values of n in " + num(elapsed) + " s"};
}

Outcome exactness_suite() {
  double worst = 0.0;
  bool ok = !constructed.empty();
  for (const auto& r : constructed) {
    const ExactnessReport ex = verify_exactness(r, r.precision, 1e-10);
    worst = std::max(worst, ex.max_error);
    ok = ok && ex.pass;
  }
  double summand = 0.0;
  for (const auto& part : verify_direct_sum(constructed.front(), 1e-10)) {
    summand = std::max(summand, part.max_error);
    ok = ok && part.pass;
  }
  return {ok, std::to_string(constructed.size()) + " rules, max relative error " + num(worst) +
                  "; direct-sum summands on Example 1 " + num(summand)};
}

Outcome gaussian_property() {
  std::mt19937_64 gen(20261016);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  double worst = 0.0;
  bool ok = true;
  for (int trial = 0; trial < 100; ++trial) {
    const int m = 1 + trial % 5;
    const int atoms = m + 1 + static_cast<int>(unit(gen) * 6);
    std::vector<double> t, w;
    for (int i = 0; i < atoms; ++i) {
      t.push_back(0.02 + 0.96 * unit(gen));
      w.push_back(0.05 + unit(gen));
    }
    MomentFunctional l;
    for (int k = 0; k <= 2 * m; ++k) {
      double s = 0.0;
      for (int i = 0; i < atoms; ++i) s += w[i] * std::pow(t[i], k);
      l.moments.push_back(s);
    }
    try {
      const EdgeQuadrature q = gaussian_quadrature(l, m);
      for (int k = 0; k <= 2 * m - 1; ++k) {
        double s = 0.0;
        for (std::size_t i = 0; i < q.size(); ++i) s += q.star_weights[i] * std::pow(q.nodes[i], k);
        const double err = std::abs(s - l.moments[k]) / l.moments[k];
        worst = std::max(worst, err);
        ok = ok && err <= 1e-11;
      }
      for (double x : q.star_weights) ok = ok && x > 0.0;
      if (m >= 2) {
        const Recurrence rec = orthogonal_recurrence(l, m);
        const auto lo = jacobi_roots(rec, m - 1);
        for (int i = 0; i + 1 < m; ++i) ok = ok && q.nodes[i] < lo[i] && lo[i] < q.nodes[i + 1];
      }
    } catch (const Error&) {
      ok = false;
    }
  }
  return {ok, "100 random measures, max relative moment error " + num(worst)};
}

Outcome even_degree() {
  ConstructOptions o;
  o.precision = 6;
  o.even = true;
  const TriangleRule r = construct(o);
  constructed.push_back(r);
  int negative = 0;
  for (const auto& n : r.all_nodes()) negative += n.weight < 0.0;
  const AuditReport a = audit(r, 1e-10);
  const ExactnessReport ex = verify_exactness(r, 6, 1e-10);
  return {negative >= 1 && !a.conforming && r.meta.conforming == false && ex.pass,
          std::to_string(negative) + " negative weights, non-conforming, degree-6 error " +
              num(ex.max_error)};
}

Outcome determinism() {
  const std::string dir = std::filesystem::temp_directory_path().string();
  const std::string a = dir + "/trilobatto_accept_a.json";
  const std::string b = dir + "/trilobatto_accept_b.json";
  const std::string flags = "construct --precision 7 --symmetric --seed 3 -o ";
  const int ca = shell(flags + a).code;
  const int cb = shell(flags + b).code;
  const std::string ta = slurp(a);
  const std::string tb = slurp(b);
  return {ca == 0 && cb == 0 && !ta.empty() && ta == tb,
          "two construct runs, " + std::to_string(ta.size()) + " bytes, identical: " +
              (ta == tb ? "yes" : "no")};
}

}  // namespace

int main() {
  const std::vector<std::pair<std::string, std::function<Outcome()>>> criteria{
      {"Example 1 reproduction", example_one},
      {"orthogonal polynomial coefficients", orthogonal_coefficients},
      {"Example 2 closed forms", example_two},
      {"Example 3 closed forms", example_three},
      {"node-count bounds", bounds_sweep},
      {"exactness oracle suite", exactness_suite},
      {"Gaussian quadrature property", gaussian_property},
      {"even-degree negative weights", even_degree},
      {"determinism", determinism},
  };
  int failed = 0;
  for (std::size_t k = 0; k < criteria.size(); ++k) {
    Outcome o;
    try {
      o = criteria[k].second();
    } catch (const std::exception& e) {
      o = {false, std::string("exception: ") + e.what()};
    }
    failed += !o.pass;
    std::cout << (o.pass ? "PASS" : "FAIL") << "  " << k + 1 << ". " << criteria[k].first
              << " -- " << o.detail << "\n";
  }
  std::cout << (criteria.size() - failed) << "/" << criteria.size() << " criteria passed\n";
  return failed == 0 ? 0 : 1;
}

// Acceptance criteria 1-9. Run with a criterion number to evaluate just
// that one, or with no argument for all. Each criterion prints one line:
//   criterion N: PASS|FAIL  <measurements>  [<seconds> s]
// The exit status is nonzero if any evaluated criterion fails.

#include "goamp/baselines.hpp"
#include "goamp/denoisers.hpp"
#include "goamp/experiment.hpp"
#include "goamp/goamp.hpp"
#include "goamp/state_evolution.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <functional>
#include <map>
#include <numbers>
#include <sstream>
#include <string>
#include <thread>
#include <vector>

using namespace goamp;

namespace {

struct Outcome {
  bool pass = false;
  std::string detail;
};

std::string fmt(const char* f, double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, f, v);
  return buf;
}

std::string sci(double v) { return fmt("%.4g", v); }

double median(std::vector<double> v) { return quantile(std::move(v), 0.5); }

int workers() { return static_cast<int>(std::max(1u, std::thread::hardware_concurrency())); }

ExperimentConfig config_from(const std::string& text) {
  auto c = build_config(parse_config_text(text, "acceptance"));
  c.workers = workers();
  return c;
}

// Median of err_unnorm or err_normdir for one (algorithm, kappa) cell.
double summary_median(const ExperimentResult& r, const std::string& alg, double kappa, bool normdir) {
  for (const auto& row : r.summary) {
    if (row.algorithm == alg && row.kappa == kappa) return normdir ? row.median_normdir : row.median_unnorm;
  }
  return std::nan("");
}

SpectralModel flat() { return SpectralModel{{1.0}, {1.0}}; }

// Threshold exactness on a flat spectrum.
Outcome criterion1() {
  const auto t0 = std::chrono::steady_clock::now();
  const double d = reconstruction_threshold(flat(), 1e-4, 1.0);
  const double ms = std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - t0).count();
  const double err = std::abs(d - 2.0002);
  return {err <= 1e-9 && ms < 1.0, "delta_* = " + fmt("%.12f", d) + ", |error| = " + sci(err) + ", " + sci(ms) + " ms"};
}

// All-or-nothing SE on a flat spectrum with constant amplitudes.
Outcome criterion2() {
  const double s2 = 1e-4;
  auto run = [&](double delta, int iters) {
    SeConfig c;
    c.delta = delta;
    c.spectrum = flat();
    c.channel = MeasurementChannel::linear(s2);
    c.law = NonzeroLaw::constant(1.0);
    c.max_iterations = iters;
    return run_se_linear(c).final_v();
  };
  const double above = run(2.2, 1000);
  const double below = run(1.8, 1000);
  double lo = 1.9;
  double hi = 2.1;
  while (hi - lo > 1e-7) {
    const double mid = 0.5 * (lo + hi);
    (run(mid, 10000) < 1e-10 ? hi : lo) = mid;
  }
  const double found = 0.5 * (lo + hi);
  const double star = reconstruction_threshold(flat(), s2, 1.0);
  const bool ok = above < 1e-10 && below >= 0.5 && std::abs(found - star) < 1e-3;
  return {ok, "v(2.2) = " + sci(above) + ", v(1.8) = " + sci(below) + ", transition " + fmt("%.6f", found) +
                  " vs delta_* " + fmt("%.6f", star)};
}

// SE chart crossings and module-A stability across kappa.
Outcome criterion3() {
  auto chart = [](double kappa) {
    SeConfig c;
    c.delta = 1.5028;
    c.spectrum = limit_spectral_model(200, kappa, 0);
    c.channel = MeasurementChannel::linear(1e-4);
    c.law = NonzeroLaw::gaussian(1.0);
    c.max_iterations = 200;
    return se_chart(c, 1e-12, 401);
  };
  const auto c1 = chart(1.0);
  const auto c150 = chart(150.0);
  const auto c5000 = chart(5000.0);
  double worst = 0.0;
  for (std::size_t i = 0; i < c1.v_B2A.size(); ++i) {
    if (c1.v_B2A[i] < 1e-3 * (1 - 1e-12)) continue;
    worst = std::max(worst, std::abs(c150.module_a[i] - c1.module_a[i]) / c1.module_a[i]);
  }
  const bool ok = c1.crossings == 1 && c150.crossings == 1 && c5000.crossings >= 2 && worst < 0.10;
  return {ok, "crossings k=1: " + std::to_string(c1.crossings) + ", k=150: " + std::to_string(c150.crossings) +
                  ", k=5000: " + std::to_string(c5000.crossings) + "; module-A gap k=1 vs k=150 " +
                  fmt("%.3f", worst)};
}

// Linear measurements at desk scale.
Outcome criterion4() {
  const std::string base =
      "n = 65536\nk = 16\nm = 200\nsnr_db = 40\ntrials = 100\nseed = 1\ntiming = false\n";
  const auto oamp = run_experiment(config_from(base + "algorithms = oamp\nkappa = 1, 1000, 10000\n"));
  const auto others = run_experiment(config_from(base + "algorithms = omp, fista\nkappa = 1000\n"));
  const double o1 = summary_median(oamp, "oamp", 1.0, false);
  const double o4 = summary_median(oamp, "oamp", 1e4, false);
  const double o3 = summary_median(oamp, "oamp", 1e3, false);
  const double omp3 = summary_median(others, "omp", 1e3, false);
  const double fista3 = summary_median(others, "fista", 1e3, false);
  const bool ok = o4 >= 10.0 * o1 && o3 <= omp3 && o3 <= fista3;
  return {ok, "oamp median k=1 " + sci(o1) + ", k=1e4 " + sci(o4) + " (ratio " + fmt("%.2f", o4 / o1) +
                  "); k=1e3 oamp " + sci(o3) + ", omp " + sci(omp3) + ", fista " + sci(fista3)};
}

// One-bit measurements at desk scale.
Outcome criterion5() {
  const auto r = run_experiment(config_from(
      "channel = onebit\nn = 16384\nk = 16\nm = 2000\nsigma2 = 0\nkappa = 1, 1000\n"
      "algorithms = goamp, biht, glasso\ndamping = 0.6, 0.6\ndamping_kappa1 = 0.7, 1\n"
      "trials = 50\nseed = 1\ntiming = false\n"));
  std::map<std::string, std::pair<double, double>> med;
  for (const std::string a : {"goamp", "biht", "glasso"}) {
    med[a] = {summary_median(r, a, 1.0, true), summary_median(r, a, 1000.0, true)};
  }
  const auto& g = med["goamp"];
  bool ok = g.second <= 3.0 * g.first;
  for (const std::string a : {"biht", "glasso"}) ok = ok && g.first < med[a].first && g.second < med[a].second;
  std::string d;
  for (const auto& [a, v] : med) d += a + " " + sci(v.first) + "/" + sci(v.second) + ", ";
  d += "goamp ratio " + fmt("%.2f", g.second / g.first) + " (k=1/k=1000 medians)";
  return {ok, d};
}

// One-bit SE versus delta at two condition numbers.
Outcome criterion6() {
  auto metric = [](double delta, double kappa) {
    SeConfig c;
    c.delta = delta;
    c.spectrum = limit_spectral_model(2000, kappa, 0);
    c.channel = MeasurementChannel::one_bit(1e-4);
    c.law = NonzeroLaw::gaussian(1.0);
    c.max_iterations = 50;
    return se_metric_normalized(run_se_bayes(c).final_v(), 1.0);
  };
  const double a15 = metric(15.0, 1.0);
  const double b15 = metric(15.0, 1000.0);
  const double a2 = metric(2.0, 1.0);
  const double b2 = metric(2.0, 1000.0);
  const double gap15 = std::abs(b15 - a15) / a15;
  const double gap2 = std::abs(b2 - a2) / a2;
  return {gap15 < 0.05 && gap2 > 0.30, "delta=15: " + sci(a15) + " vs " + sci(b15) + " (gap " + fmt("%.3f", gap15) +
                                            "); delta=2: " + sci(a2) + " vs " + sci(b2) + " (gap " + fmt("%.2f", gap2) +
                                            ")"};
}

long double bg_mean_oracle(long double y, long double v, long double rho, long double s) {
  const long double pi = std::numbers::pi_v<long double>;
  const long double n1 = rho * std::exp(-y * y / (2 * (s + v))) / std::sqrt(2 * pi * (s + v));
  const long double n0 = (1 - rho) * std::exp(-y * y / (2 * v)) / std::sqrt(2 * pi * v);
  return n1 / (n1 + n0) * s / (s + v) * y;
}

double simpson(const std::function<double(double)>& f, double a, double b, double fa, double fm, double fb,
               double whole, double tol, int depth) {
  const double m = 0.5 * (a + b);
  const double lm = f(0.5 * (a + m));
  const double rm = f(0.5 * (m + b));
  const double left = (m - a) / 6.0 * (fa + 4.0 * lm + fm);
  const double right = (b - m) / 6.0 * (fm + 4.0 * rm + fb);
  if (depth <= 0 || std::abs(left + right - whole) <= 15.0 * tol) return left + right + (left + right - whole) / 15.0;
  return simpson(f, a, m, fa, lm, fm, left, tol / 2, depth - 1) + simpson(f, m, b, fm, rm, fb, right, tol / 2, depth - 1);
}

double integrate(const std::function<double(double)>& f, double a, double b) {
  const double fa = f(a);
  const double fb = f(b);
  const double fm = f(0.5 * (a + b));
  return simpson(f, a, b, fa, fm, fb, (b - a) / 6.0 * (fa + 4.0 * fm + fb), 1e-15, 50);
}

// Oracle-equivalence suite.
Outcome criterion7() {
  // GOAMP and OAMP on linear channels.
  double equiv = 0.0;
  for (std::uint64_t t = 0; t < 10; ++t) {
    const auto p = make_problem(256, 4, 64, std::pow(10.0, static_cast<double>(t % 5)), NonzeroLaw::gaussian(1.0),
                                MeasurementChannel::linear(1e-3), 71, t);
    GoampOptions opts;
    const auto g = run_goamp(p, opts);
    const auto o = run_oamp_linear(p, opts);
    for (std::size_t i = 0; i < g.records.size() && i < o.records.size(); ++i) {
      equiv = std::max(equiv, std::abs(g.records[i].err_unnorm - o.records[i].err_unnorm));
    }
    if (g.records.size() != o.records.size()) equiv = INFINITY;
    equiv = std::max(equiv, (g.estimate - o.estimate).cwiseAbs().maxCoeff());
  }

  // Divergences against central differences.
  double xi_rel = 0.0;
  {
    const auto p = make_problem(256, 4, 64, 30.0, NonzeroLaw::gaussian(1.0), MeasurementChannel::linear(1e-3), 72, 0);
    const Matrix a = p.op->dense();
    const double vz = 0.25;
    const double vx = 0.2;
    const double gamma = 256.0 * vz / vx;
    const Matrix aat = a * a.transpose();
    const Eigen::PartialPivLU<Matrix> lu(gamma * Matrix::Identity(64, 64) + aat);
    RandomStream rng(72, 1);
    Vector z(64);
    for (Index i = 0; i < 64; ++i) z[i] = rng.normal();
    double fd = 0.0;
    for (Index i = 0; i < 64; ++i) {
      Vector e = Vector::Zero(64);
      e[i] = 1e-4;
      fd += (aat * lu.solve(z + e) - aat * lu.solve(z - e))[i] / 2e-4;
    }
    fd /= 64.0;
    xi_rel = std::max(xi_rel, std::abs(se_xi_a_z(vx, vz, spectral_model_of(*p.op)) - fd) / fd);

    const InnerPrior prior = InnerPrior::from_sparsity(2048, 8, 1.0);
    Vector x(2048);
    for (Index i = 0; i < x.size(); ++i) x[i] = (i % 256 == 0 ? 0.35 : 0.0) + 0.02 * rng.normal();
    const double v = 4e-4;
    const double xi = bg_divergence_xi(bg_posterior_variance_sum(x, v, prior), v * 256.0) * 256.0 / 2048.0;
    double fdi = 0.0;
    for (Index i = 0; i < x.size(); ++i) {
      fdi += (bg_posterior(x[i] + 1e-6, v, prior).mean - bg_posterior(x[i] - 1e-6, v, prior).mean) / 2e-6;
    }
    fdi /= 2048.0;
    xi_rel = std::max(xi_rel, std::abs(xi - fdi) / fdi);

    const auto ch = MeasurementChannel::one_bit(1e-2);
    Vector zt(400), y(400);
    for (Index i = 0; i < 400; ++i) {
      zt[i] = 0.8 * rng.normal();
      y[i] = zt[i] + 0.5 * rng.normal() >= 0.0 ? 1.0 : -1.0;
    }
    const double xo = outer_divergence_xi(ch, zt, y, 0.3);
    double fdo = 0.0;
    for (Index i = 0; i < 400; ++i) {
      fdo += (outer_posterior(ch, zt[i] + 1e-5, y[i], 0.3).mean - outer_posterior(ch, zt[i] - 1e-5, y[i], 0.3).mean) /
             2e-5;
    }
    fdo /= 400.0;
    xi_rel = std::max(xi_rel, std::abs(xo - fdo) / fdo);
  }

  // Resolvent against a dense solve.
  double resolvent = 0.0;
  {
    RandomStream rng(73, 0);
    const auto op = build_operator(8, 16, 20.0, rng);
    const Matrix a = op.dense();
    Vector r(8);
    for (Index i = 0; i < 8; ++i) r[i] = rng.normal();
    for (double gamma : {1e-3, 1.0, 50.0}) {
      const Vector want = (gamma * Matrix::Identity(8, 8) + a * a.transpose()).lu().solve(r);
      resolvent = std::max(resolvent, (lmmse_resolvent_apply(op, gamma, r) - want).norm() / want.norm());
    }
  }

  // Spike-slab posterior against extended precision.
  double posterior = 0.0;
  {
    RandomStream rng(74, 0);
    for (int i = 0; i < 2000; ++i) {
      const double rho = std::exp(-8.0 * rng.uniform());
      const double s = std::exp(4.0 * rng.normal());
      const double v = std::exp(3.0 * rng.normal());
      const double y = std::sqrt(s + v) * 3.0 * rng.normal();
      const double want = static_cast<double>(bg_mean_oracle(y, v, rho, s));
      const double got = bg_posterior(y, v, InnerPrior{rho, s}).mean;
      posterior = std::max(posterior, std::abs(got - want) / std::max(std::abs(want), 1e-300));
    }
  }

  // SE maps against summation and quadrature.
  double se = 0.0;
  {
    const auto spec = limit_spectral_model(200, 100.0, 0);
    long double sum = 0.0L;
    long double inv = 0.0L;
    for (std::size_t i = 0; i < spec.values.size(); ++i) {
      const long double l = spec.values[i];
      sum += spec.weights[i] * l / (1e-4L + l);
      inv += spec.weights[i] * l / (1e-4L + l);
    }
    se = std::max(se, std::abs(se_xi_a_z(1.0, 1e-4, spec) - static_cast<double>(sum)) / static_cast<double>(sum));
    const double psi = static_cast<double>(2.0L / 1.5L / inv);
    se = std::max(se, std::abs(se_linear_psi(1.0, 1.5, 1e-4, spec) - psi) / psi);
    const double phi = integrate([](double u) { return u * u * std::exp(-0.5 * u * u) / std::sqrt(2 * std::numbers::pi); },
                                 -1.0, 1.0);
    se = std::max(se, std::abs(se_inner_map_phi(1.0, NonzeroLaw::gaussian(1.0)) - phi) / phi);
    const auto ch = MeasurementChannel::one_bit(1e-4);
    for (double v : {0.5, 0.05}) {
      const double s = std::sqrt(1.0 - v);
      const double tau = std::sqrt(v + 1e-4);
      auto f = [&](double zt) {
        double acc = 0.0;
        for (double yy : {-1.0, 1.0}) {
          const double py = 0.5 * std::erfc(-yy * zt / tau / std::sqrt(2.0));
          if (py > 0.0) acc += py * outer_posterior(ch, zt, yy, v).variance;
        }
        return acc / v * std::exp(-0.5 * zt * zt / (s * s)) / (s * std::sqrt(2 * std::numbers::pi));
      };
      const double want = integrate(f, -12.0 * s, 0.0) + integrate(f, 0.0, 12.0 * s);
      se = std::max(se, std::abs(se_outer_step_bayes(v, ch, 1.0, 80).xi_bar - want) / want);
    }
  }

  const bool ok = equiv < 1e-8 && xi_rel < 1e-3 && resolvent < 1e-10 && posterior < 1e-12 && se < 1e-10;
  return {ok, "goamp/oamp " + sci(equiv) + ", divergences " + sci(xi_rel) + ", resolvent " + sci(resolvent) +
                  ", posterior " + sci(posterior) + ", se maps " + sci(se)};
}

// Orthogonality diagnostics in the one-bit setting, with and without Onsager terms.
Outcome criterion8() {
  const int trials = 50;
  const int iters = 6;  // x-side messages h_{x,t} for t = 0..5
  std::vector<double> z, za;
  std::vector<std::vector<double>> x(iters), xa(iters);
  for (int t = 0; t < trials; ++t) {
    const auto p = make_problem(1 << 14, 16, 2000, 1.0, NonzeroLaw::gaussian(1.0), MeasurementChannel::one_bit(0.0), 1,
                                static_cast<std::uint64_t>(t));
    GoampOptions opts;
    opts.iterations = iters;
    opts.damping = {0.7, 1.0};
    opts.keep_history = true;
    const auto rep = diagnostics_orthogonality(p, run_goamp(p, opts));
    opts.onsager = false;
    const auto abl = diagnostics_orthogonality(p, run_goamp(p, opts));
    z.push_back(std::abs(rep.z_init_corr));
    za.push_back(std::abs(abl.z_init_corr));
    for (int i = 0; i < iters; ++i) {
      x[i].push_back(i < static_cast<int>(rep.x_corr.size()) ? std::abs(rep.x_corr[i]) : std::nan(""));
      xa[i].push_back(i < static_cast<int>(abl.x_corr.size()) ? std::abs(abl.x_corr[i]) : std::nan(""));
    }
  }
  const double mz = median(z);
  const double mza = median(za);
  double mx = 0.0;
  double mxa = 0.0;
  std::string xs;
  for (int i = 0; i < iters; ++i) {
    mx = std::max(mx, median(x[i]));
    mxa = std::max(mxa, median(xa[i]));
    xs += (i ? " " : "") + fmt("%.3f", median(x[i]));
  }
  const bool ok = mz <= 0.05 && mx <= 0.05 && std::max(mza, mxa) >= 0.2;
  return {ok, "|z corr| " + fmt("%.3f", mz) + ", |x corr| by t [" + xs + "]; ablated z " + fmt("%.3f", mza) +
                  ", ablated x max " + fmt("%.3f", mxa)};
}

// Golden CSVs across worker counts.
Outcome criterion9() {
  bool ok = true;
  std::string d;
  for (const std::string name : {"tiny_linear", "tiny_onebit"}) {
    const std::string dir = GOAMP_GOLDEN_DIR;
    std::ifstream in(dir + "/" + name + ".csv", std::ios::binary);
    std::stringstream golden;
    golden << in.rdbuf();
    auto c = build_config(parse_config_file(dir + "/" + name + ".cfg"));
    for (int w : {1, 8}) {
      c.workers = w;
      std::ostringstream os;
      write_csv(os, run_experiment(c).records);
      const bool same = in && os.str() == golden.str();
      ok = ok && same;
      d += name + "@" + std::to_string(w) + (same ? " equal" : " DIFFERS") + ", ";
    }
  }
  d.resize(d.size() - 2);
  return {ok, d};
}

struct Criterion {
  Outcome (*run)();
  double budget_s;
};

const Criterion kCriteria[] = {
    {criterion1, 1.0},   {criterion2, 1.0},  {criterion3, 10.0}, {criterion4, 600.0}, {criterion5, 900.0},
    {criterion6, 30.0},  {criterion7, 30.0}, {criterion8, 300.0}, {criterion9, 5.0},
};

bool evaluate(int n) {
  const auto& c = kCriteria[n - 1];
  const auto t0 = std::chrono::steady_clock::now();
  Outcome o;
  try {
    o = c.run();
  } catch (const std::exception& e) {
    o = {false, std::string("exception: ") + e.what()};
  }
  const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  const bool in_time = secs < c.budget_s;
  const bool pass = o.pass && in_time;
  std::printf("criterion %d: %s  %s  [%.2f s%s]\n", n, pass ? "PASS" : "FAIL", o.detail.c_str(), secs,
              in_time ? "" : fmt(", budget %g s exceeded", c.budget_s).c_str());
  std::fflush(stdout);
  return pass;
}

}  // namespace

int main(int argc, char** argv) {
  std::vector<int> which;
  for (int i = 1; i < argc; ++i) {
    const int n = std::atoi(argv[i]);
    if (n < 1 || n > 9) {
      std::fprintf(stderr, "usage: %s [criterion 1-9 ...]\n", argv[0]);
      return 2;
    }
    which.push_back(n);
  }
  if (which.empty()) {
    for (int n = 1; n <= 9; ++n) which.push_back(n);
  }
  bool all = true;
  for (int n : which) all = evaluate(n) && all;
  return all ? 0 : 1;
}

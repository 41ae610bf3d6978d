#include "homsim/analysis.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <limits>
#include <sstream>
#include <stdexcept>

namespace homsim {

Classifier::Classifier(std::int64_t window_ns)
    : window_ns_(window_ns), last_t_(std::numeric_limits<std::int64_t>::min()) {
  if (window_ns < 0)
    throw std::invalid_argument("coincidence window must be nonnegative");
  counts_.window_ns = window_ns;
}

void Classifier::feed(const EventRecord& event) {
  if (event.t_ns < last_t_)
    throw std::invalid_argument("event stream is not time-ordered");
  last_t_ = event.t_ns;

  if (event.n_inferred == 2) {
    (event.det == 'A' ? counts_.doubles_a : counts_.doubles_b)++;
    return;
  }
  if (event.n_inferred != 1) return;

  (event.det == 'A' ? counts_.singles_a : counts_.singles_b)++;
  auto& own = event.det == 'A' ? pending_a_ : pending_b_;
  auto& other = event.det == 'A' ? pending_b_ : pending_a_;

  // expire opposite-side singles that can no longer match anything
  while (!other.empty() && other.front() < event.t_ns - window_ns_)
    other.pop_front();
  if (!other.empty()) {
    other.pop_front();  // earliest unmatched partner within the window
    counts_.cross++;
  } else {
    own.push_back(event.t_ns);
  }
}

CountsSummary Classifier::finish(std::uint64_t n_pairs_assumed) const {
  CountsSummary out = counts_;
  out.n_pairs_assumed = n_pairs_assumed;
  return out;
}

CountsSummary classify(const EventStream& stream, std::int64_t window_ns) {
  Classifier c(window_ns);
  for (const EventRecord& e : stream.events) c.feed(e);
  return c.finish(stream.pairs_generated);
}

namespace {

// binomial standard error of a count k out of n, scaled by 1/divisor
double scaled_binomial_err(std::uint64_t k, std::uint64_t n, double divisor) {
  const double q = static_cast<double>(k) / static_cast<double>(n);
  return std::sqrt(q * (1.0 - q) / static_cast<double>(n)) / divisor;
}

}  // namespace

EstimatedPoint estimate(const CountsSummary& summary, double eta_a,
                        double eta_b, double tau_fs) {
  if (!(eta_a > 0.0 && eta_a <= 1.0) || !(eta_b > 0.0 && eta_b <= 1.0))
    throw std::invalid_argument("efficiencies must lie in (0, 1]");
  if (summary.n_pairs_assumed == 0)
    throw std::invalid_argument("pair count must be positive");

  const double n = static_cast<double>(summary.n_pairs_assumed);
  EstimatedPoint pt;
  pt.tau_fs = tau_fs;
  pt.p20_hat = summary.doubles_a / (n * eta_a * eta_a);
  pt.p02_hat = summary.doubles_b / (n * eta_b * eta_b);
  pt.p11_hat = summary.cross / (n * eta_a * eta_b);
  pt.p20_err = scaled_binomial_err(summary.doubles_a, summary.n_pairs_assumed,
                                   eta_a * eta_a);
  pt.p02_err = scaled_binomial_err(summary.doubles_b, summary.n_pairs_assumed,
                                   eta_b * eta_b);
  pt.p11_err = scaled_binomial_err(summary.cross, summary.n_pairs_assumed,
                                   eta_a * eta_b);
  pt.eta_corrected = true;
  pt.degenerate =
      summary.doubles_a == 0 || summary.doubles_b == 0 || summary.cross == 0;
  return pt;
}

EtaEstimate klyshko_eta(const CountsSummary& summary) {
  if (summary.singles_a == 0 || summary.singles_b == 0)
    throw std::invalid_argument("calibration needs singles at both detectors");
  const double r_a = static_cast<double>(summary.cross) /
                     static_cast<double>(summary.singles_b);
  const double r_b = static_cast<double>(summary.cross) /
                     static_cast<double>(summary.singles_a);
  const double denom = 1.0 - r_a * r_b;
  if (!(denom > 0.0))
    throw std::invalid_argument("calibration ratios are inconsistent");
  return EtaEstimate{4.0 * r_a * (1.0 - r_b) / denom,
                     4.0 * r_b * (1.0 - r_a) / denom};
}

std::uint64_t pairs_from_klyshko(const CountsSummary& summary) {
  if (summary.cross == 0)
    throw std::invalid_argument("calibration needs cross-coincidences");
  const EtaEstimate eta = klyshko_eta(summary);
  const double n = 8.0 * static_cast<double>(summary.cross) /
                   (eta.eta_a * eta.eta_b);
  return static_cast<std::uint64_t>(std::llround(n));
}

namespace {

double unit_triangle(double u) {
  const double a = std::abs(u);
  return a >= 1.0 ? 0.0 : 1.0 - a;
}

struct VisibilityObjective {
  std::span<const EstimatedPoint> curve;

  // least-squares objective at (center, width), with the visibility solved
  // in closed form (the model is linear in v)
  double operator()(double center, double width, double* v_out) const {
    double num = 0.0;
    double den = 0.0;
    for (const EstimatedPoint& pt : curve) {
      const double tri = unit_triangle((pt.tau_fs - center) / (0.5 * width));
      const double b11 = -tri / 8.0;
      const double b20 = tri / 16.0;
      num += b11 * (pt.p11_hat - 0.125) + b20 * (pt.p20_hat - 0.0625);
      den += b11 * b11 + b20 * b20;
    }
    const double v = den > 0.0 ? num / den : 0.0;
    if (v_out) *v_out = v;

    double ss = 0.0;
    for (const EstimatedPoint& pt : curve) {
      const double tri = unit_triangle((pt.tau_fs - center) / (0.5 * width));
      const double r11 = pt.p11_hat - (0.125 - v * tri / 8.0);
      const double r20 = pt.p20_hat - (0.0625 + v * tri / 16.0);
      ss += r11 * r11 + r20 * r20;
    }
    return ss;
  }
};

}  // namespace

TriangleFit fit_visibility(std::span<const EstimatedPoint> curve) {
  if (curve.size() < 7)
    throw std::invalid_argument("triangle fit needs at least 7 tau points");
  for (std::size_t i = 0; i + 1 < curve.size(); ++i)
    if (!(curve[i].tau_fs < curve[i + 1].tau_fs))
      throw std::invalid_argument("curve points must have increasing tau");

  const VisibilityObjective objective{curve};
  const double span = curve.back().tau_fs - curve.front().tau_fs;

  // initial simplex: center at the p11 minimum, width a third of the span
  double c0 = curve.front().tau_fs;
  double best11 = std::numeric_limits<double>::infinity();
  for (const EstimatedPoint& pt : curve)
    if (pt.p11_hat < best11) {
      best11 = pt.p11_hat;
      c0 = pt.tau_fs;
    }
  const double w0 = span / 3.0;

  struct Vertex {
    double c, w, f;
  };
  auto eval = [&](double c, double w) {
    return Vertex{c, w, objective(c, std::abs(w) + 1e-12, nullptr)};
  };
  std::array<Vertex, 3> simplex{eval(c0, w0), eval(c0 + 0.2 * span, w0),
                                eval(c0, 1.7 * w0)};

  constexpr int kMaxIterations = 500;
  int it = 0;
  bool converged = false;
  for (; it < kMaxIterations; ++it) {
    std::sort(simplex.begin(), simplex.end(),
              [](const Vertex& a, const Vertex& b) { return a.f < b.f; });
    const double extent = std::max(
        std::abs(simplex[2].c - simplex[0].c) + std::abs(simplex[2].w - simplex[0].w),
        std::abs(simplex[2].f - simplex[0].f));
    if (extent < 1e-11 * (1.0 + span)) {
      converged = true;
      break;
    }
    const double cc = 0.5 * (simplex[0].c + simplex[1].c);
    const double cw = 0.5 * (simplex[0].w + simplex[1].w);
    const Vertex& worst = simplex[2];

    Vertex refl = eval(cc + (cc - worst.c), cw + (cw - worst.w));
    if (refl.f < simplex[0].f) {
      Vertex expd = eval(cc + 2.0 * (cc - worst.c), cw + 2.0 * (cw - worst.w));
      simplex[2] = expd.f < refl.f ? expd : refl;
    } else if (refl.f < simplex[1].f) {
      simplex[2] = refl;
    } else {
      Vertex contr = eval(cc + 0.5 * (worst.c - cc), cw + 0.5 * (worst.w - cw));
      if (contr.f < worst.f) {
        simplex[2] = contr;
      } else {
        // shrink toward the best vertex
        simplex[1] = eval(simplex[0].c + 0.5 * (simplex[1].c - simplex[0].c),
                          simplex[0].w + 0.5 * (simplex[1].w - simplex[0].w));
        simplex[2] = eval(simplex[0].c + 0.5 * (simplex[2].c - simplex[0].c),
                          simplex[0].w + 0.5 * (simplex[2].w - simplex[0].w));
      }
    }
  }

  std::sort(simplex.begin(), simplex.end(),
            [](const Vertex& a, const Vertex& b) { return a.f < b.f; });
  TriangleFit fit;
  fit.tau_center_fs = simplex[0].c;
  fit.width_fs = std::abs(simplex[0].w);
  fit.residual_norm = std::sqrt(
      objective(simplex[0].c, fit.width_fs + 1e-12, &fit.visibility));
  fit.converged = converged;
  fit.iterations = it;
  fit.width_identifiable = fit.visibility >= 0.02;
  return fit;
}

// ---- CSV ----

namespace {

[[noreturn]] void fail_csv(const std::filesystem::path& file,
                           std::size_t line_no, const std::string& what) {
  throw std::runtime_error(file.string() + ":" + std::to_string(line_no) +
                           ": " + what);
}

std::vector<double> parse_csv_row(const std::string& line,
                                  std::size_t n_fields,
                                  const std::filesystem::path& file,
                                  std::size_t line_no) {
  std::vector<double> out;
  std::stringstream ss(line);
  std::string cell;
  while (std::getline(ss, cell, ',')) {
    try {
      std::size_t used = 0;
      out.push_back(std::stod(cell, &used));
      if (used != cell.size()) throw std::invalid_argument(cell);
    } catch (const std::exception&) {
      fail_csv(file, line_no, "bad numeric cell \"" + cell + "\"");
    }
  }
  if (out.size() != n_fields)
    fail_csv(file, line_no, "expected " + std::to_string(n_fields) + " columns");
  return out;
}

}  // namespace

void write_estimates_csv(std::span<const EstimatedPoint> points,
                         const std::filesystem::path& file) {
  std::ofstream out(file, std::ios::binary);
  if (!out) throw std::runtime_error("cannot open " + file.string());
  out << "tau_fs,p20,p20_err,p02,p02_err,p11,p11_err\n";
  char buf[256];
  for (const EstimatedPoint& p : points) {
    std::snprintf(buf, sizeof(buf),
                  "%.6f,%.12f,%.12f,%.12f,%.12f,%.12f,%.12f\n", p.tau_fs,
                  p.p20_hat, p.p20_err, p.p02_hat, p.p02_err, p.p11_hat,
                  p.p11_err);
    out << buf;
  }
  if (!out) throw std::runtime_error("write failed: " + file.string());
}

std::vector<EstimatedPoint> read_estimates_csv(
    const std::filesystem::path& file) {
  std::ifstream in(file, std::ios::binary);
  if (!in) throw std::runtime_error("cannot open " + file.string());
  std::string line;
  std::size_t line_no = 0;
  if (!std::getline(in, line) ||
      line != "tau_fs,p20,p20_err,p02,p02_err,p11,p11_err")
    fail_csv(file, 1, "bad or missing estimates header");
  ++line_no;

  std::vector<EstimatedPoint> points;
  while (std::getline(in, line)) {
    ++line_no;
    const auto row = parse_csv_row(line, 7, file, line_no);
    EstimatedPoint p;
    p.tau_fs = row[0];
    p.p20_hat = row[1];
    p.p20_err = row[2];
    p.p02_hat = row[3];
    p.p02_err = row[4];
    p.p11_hat = row[5];
    p.p11_err = row[6];
    p.eta_corrected = true;
    points.push_back(p);
  }
  return points;
}

void write_curve_csv(const InterferenceCurve& curve,
                     const std::filesystem::path& file) {
  std::ofstream out(file, std::ios::binary);
  if (!out) throw std::runtime_error("cannot open " + file.string());
  out << "tau_fs,p20,p02,p11\n";
  char buf[160];
  for (const InterferencePoint& p : curve.points) {
    std::snprintf(buf, sizeof(buf), "%.6f,%.12f,%.12f,%.12f\n", p.tau_fs,
                  p.p20, p.p02, p.p11);
    out << buf;
  }
  if (!out) throw std::runtime_error("write failed: " + file.string());
}

std::vector<InterferencePoint> read_curve_csv(
    const std::filesystem::path& file) {
  std::ifstream in(file, std::ios::binary);
  if (!in) throw std::runtime_error("cannot open " + file.string());
  std::string line;
  std::size_t line_no = 0;
  if (!std::getline(in, line) || line != "tau_fs,p20,p02,p11")
    fail_csv(file, 1, "bad or missing curve header");
  ++line_no;

  std::vector<InterferencePoint> points;
  while (std::getline(in, line)) {
    ++line_no;
    const auto row = parse_csv_row(line, 4, file, line_no);
    points.push_back(InterferencePoint{row[0], row[1], row[2], row[3]});
  }
  return points;
}

}  // namespace homsim

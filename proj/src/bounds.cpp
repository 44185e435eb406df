#include "locfade/bounds.hpp"

#include <cmath>
#include <numbers>
#include <string>

#include "locfade/errors.hpp"

namespace locfade {

namespace {

constexpr double kPi = std::numbers::pi;
constexpr double kMaxCondition = 1e12;

void check_positive(double v, const char* what) {
  if (!(v > 0.0) || !std::isfinite(v)) throw DomainError(std::string(what) + " must be positive");
}

void check_m(double m) {
  if (!(m >= 0.5) || !std::isfinite(m)) throw DomainError("m must be finite and >= 0.5");
}

void check_geometry(std::span<const Point> anchors, int dimension) {
  if (dimension != 1 && dimension != 2) throw DomainError("dimension must be 1 or 2");
  if (anchors.size() < static_cast<std::size_t>(dimension + 1)) {
    throw DomainError("need at least dimension + 1 anchors");
  }
}

// ∫_{-a}^{∞} g(t) dt for an even integrand g.
double even_from(double a, const RealFunction& g, const QuadratureSpec& quad, double scale) {
  double total = integrate_semi_infinite(g, quad, scale).value;
  if (a > 0.0) total += integrate(g, 0.0, a, quad).value;
  return total;
}

// m^{m+5/2} X / σ³ as a function of a = d/(cσ).
double x_scaled(double a, double m, const QuadratureSpec& quad) {
  const double p = m + 2.5;
  auto g = [m, p](double t) { return t * t * std::exp(-p * std::log1p(t * t / (2.0 * m))); };
  return even_from(a, g, quad, 2.0);
}

double x_scaled_leading(double m) {
  return std::exp(0.5 * std::log(2.0) + ln_gamma(1.5) + ln_gamma(m + 1.0) + 1.5 * std::log(m) -
                  ln_gamma(m + 2.5));
}

BoundReport report(double crlb, BoundRegime regime, BoundMethod method, double awgn) {
  return {crlb, regime, method, crlb / awgn};
}

}  // namespace

double FisherMatrix::crlb() const {
  if (node_count != 1) throw DomainError("FisherMatrix::crlb: single-node matrices only");
  if (dimension == 1) {
    const double f = entries.at(0);
    if (!(f > 0.0)) throw SingularGeometryError("Fisher information is zero");
    return 1.0 / f;
  }
  const double a = at(0, 0), b = at(0, 1), d = at(1, 1);
  const double half_tr = 0.5 * (a + d);
  const double disc = std::sqrt(0.25 * (a - d) * (a - d) + b * b);
  const double lmax = half_tr + disc;
  const double lmin = half_tr - disc;
  if (!(lmin > 0.0) || lmax / lmin > kMaxCondition) {
    throw SingularGeometryError("Fisher matrix is singular or ill-conditioned");
  }
  const double det = a * d - b * b;
  return (a + d) / det;  // tr of the cofactor inverse
}

FisherMatrix fisher_from_weights(std::span<const Point> anchors, Point node,
                                 std::span<const double> weights, int dimension) {
  if (weights.size() != anchors.size()) throw DomainError("fisher_from_weights: length mismatch");
  FisherMatrix F;
  F.dimension = dimension;
  if (dimension == 1) {
    double s = 0.0;
    for (double w : weights) s += w;
    F.entries = {s};
    return F;
  }
  double xx = 0.0, xy = 0.0, yy = 0.0;
  for (std::size_t i = 0; i < anchors.size(); ++i) {
    const double dx = anchors[i].x - node.x;
    const double dy = anchors[i].y - node.y;
    const double d2 = dx * dx + dy * dy;
    if (!(d2 > 0.0)) throw SingularGeometryError("node coincides with an anchor");
    xx += weights[i] * dx * dx / d2;
    xy += weights[i] * dx * dy / d2;
    yy += weights[i] * dy * dy / d2;
  }
  F.entries = {xx, xy, xy, yy};
  return F;
}

BoundReport crlb_awgn(std::span<const Point> anchors, Point node, double sigma, double c,
                      int dimension) {
  check_geometry(anchors, dimension);
  check_positive(sigma, "sigma");
  check_positive(c, "c");
  const std::vector<double> w(anchors.size(), 1.0 / (c * c * sigma * sigma));
  const double crlb = fisher_from_weights(anchors, node, w, dimension).crlb();
  return {crlb, BoundRegime::Awgn, BoundMethod::ClosedForm, 1.0};
}

BoundReport crlb_known_fading(std::span<const Point> anchors, Point node, double sigma, double c,
                              std::span<const double> envelopes, int dimension) {
  check_geometry(anchors, dimension);
  check_positive(sigma, "sigma");
  check_positive(c, "c");
  if (envelopes.size() != anchors.size()) throw DomainError("crlb_known_fading: length mismatch");
  std::vector<double> w(anchors.size());
  for (std::size_t i = 0; i < w.size(); ++i) {
    if (!(envelopes[i] > 0.0)) throw DegenerateChannelError("crlb_known_fading: zero envelope");
    w[i] = envelopes[i] * envelopes[i] / (c * c * sigma * sigma);
  }
  const double crlb = fisher_from_weights(anchors, node, w, dimension).crlb();
  const double awgn = crlb_awgn(anchors, node, sigma, c, dimension).crlb;
  return report(crlb, BoundRegime::KnownFading, BoundMethod::ClosedForm, awgn);
}

BoundReport mcrlb(std::span<const Point> anchors, Point node, double sigma, double c,
                  int dimension) {
  // E|h|² = 1, so the expected information equals the AWGN information.
  BoundReport r = crlb_awgn(anchors, node, sigma, c, dimension);
  r.regime = BoundRegime::Modified;
  return r;
}

double x_integral(double d, double sigma, double c, double m, const QuadratureSpec& quad) {
  check_m(m);
  check_positive(sigma, "sigma");
  check_positive(c, "c");
  const double a = d / (c * sigma);
  return std::pow(sigma, 3) * std::exp(-(m + 2.5) * std::log(m)) * x_scaled(a, m, quad);
}

double x_integral_leading(double sigma, double m) {
  check_m(m);
  return std::pow(sigma, 3) * std::exp(-(m + 2.5) * std::log(m)) * x_scaled_leading(m);
}

double x_integral_bound(double d, double sigma, double c, double m) {
  const double a = d / (c * sigma);
  const double second = a * a * std::exp(-(m + 2.5) * std::log(0.5 * a * a + m));
  return x_integral_leading(sigma, m) + std::pow(sigma, 3) * second;
}

double y_integral(double d, double sigma, double c, const QuadratureSpec& quad) {
  check_positive(sigma, "sigma");
  check_positive(c, "c");
  const double a = d / (c * sigma);
  auto g = [](double t) {
    const double q = 1.0 + t * t;
    return t * t / (q * q * q);
  };
  return std::pow(sigma, 3) * even_from(a, g, quad, 1.0);
}

double y_integral_bound(double d, double sigma, double c) {
  const double a = d / (c * sigma);
  const double q = 1.0 + a * a;
  return std::pow(sigma, 3) * (kPi / 16.0 + a * a / (q * q * q));
}

double nakagami_information(double d, double sigma, double c, double m, BoundMethod method,
                            const QuadratureSpec& quad) {
  check_m(m);
  check_positive(sigma, "sigma");
  check_positive(c, "c");
  if (method == BoundMethod::ClosedForm) {
    // leading term of X reduces the information to 1/(k c² σ²)
    return 1.0 / (loss_ratio_k(m) * c * c * sigma * sigma);
  }
  const double J = x_scaled(d / (c * sigma), m, quad);
  // mᵐ Γ(m+½)(m+½)² X / (Γ(m) √(2π) c² σ⁵) with X = σ³ m^{-(m+5/2)} J
  const double log_pref = ln_gamma(m + 0.5) - ln_gamma(m) - 2.5 * std::log(m) -
                          0.5 * std::log(2.0 * kPi);
  return std::exp(log_pref) * (m + 0.5) * (m + 0.5) * J / (c * c * sigma * sigma);
}

double nocsi_information(double d, double sigma, double c, BoundMethod method,
                         const QuadratureSpec& quad) {
  if (method == BoundMethod::ClosedForm) return 0.25 / (c * c * sigma * sigma);  // Y = σ³π/16
  return 4.0 * y_integral(d, sigma, c, quad) / (c * c * std::pow(sigma, 5) * kPi);
}

BoundReport crlb_nakagami(std::span<const Point> anchors, Point node,
                          std::span<const double> sigmas, double c, double m, int dimension,
                          BoundMethod method, const QuadratureSpec& quad) {
  check_geometry(anchors, dimension);
  check_m(m);
  const std::size_t M = anchors.size();
  if (sigmas.size() != 1 && sigmas.size() != M) {
    throw DomainError("crlb_nakagami: give one sigma or one per anchor");
  }
  std::vector<double> w(M), w_awgn(M);
  for (std::size_t i = 0; i < M; ++i) {
    const double s = sigmas.size() == 1 ? sigmas[0] : sigmas[i];
    w[i] = nakagami_information(distance(anchors[i], node), s, c, m, method, quad);
    w_awgn[i] = 1.0 / (c * c * s * s);
  }
  const double crlb = fisher_from_weights(anchors, node, w, dimension).crlb();
  const double awgn = fisher_from_weights(anchors, node, w_awgn, dimension).crlb();
  return report(crlb, BoundRegime::Nakagami, method, awgn);
}

double loss_ratio_k(double m) {
  check_m(m);
  // √π/Γ(3/2) = 2 and Γ(m+5/2)/Γ(m+½) = (m+3/2)(m+½)
  return 2.0 * (m + 1.5) / (m + 0.5);
}

BoundReport crlb_nocsi(std::span<const Point> anchors, Point node, double sigma, double c,
                       double m, int dimension, BoundMethod method, const QuadratureSpec& quad) {
  if (m != 1.0) throw UnsupportedRegimeError("crlb_nocsi: derived for Rayleigh fading (m = 1) only");
  check_geometry(anchors, dimension);
  check_positive(sigma, "sigma");
  check_positive(c, "c");
  std::vector<double> w(anchors.size());
  for (std::size_t i = 0; i < w.size(); ++i) {
    w[i] = nocsi_information(distance(anchors[i], node), sigma, c, method, quad);
  }
  const double crlb = fisher_from_weights(anchors, node, w, dimension).crlb();
  const double awgn = crlb_awgn(anchors, node, sigma, c, dimension).crlb;
  return report(crlb, BoundRegime::NoCsi, method, awgn);
}

BoundReport crlb_cooperative(int M, int N, double sigma, double c, double m, BoundRegime regime) {
  if (M < 2 || N < 1) throw DomainError("crlb_cooperative: need M >= 2 and N >= 1");
  check_positive(sigma, "sigma");
  check_positive(c, "c");
  double k = 0.0;
  if (regime == BoundRegime::Nakagami) {
    k = loss_ratio_k(m);
  } else if (regime == BoundRegime::NoCsi) {
    if (m != 1.0) throw UnsupportedRegimeError("crlb_cooperative: no-CSI needs m = 1");
    k = 4.0;
  } else {
    throw UnsupportedRegimeError("crlb_cooperative: regime must be Nakagami or NoCsi");
  }
  const double awgn = c * c * sigma * sigma / M;
  const double noncoop = k * awgn;
  const double crlb = noncoop * (static_cast<double>(M + 1) / static_cast<double>(N + M));
  return report(crlb, regime, BoundMethod::ClosedForm, awgn);
}

}  // namespace locfade

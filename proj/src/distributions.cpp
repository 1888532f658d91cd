#include "rconf/distributions.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <numeric>
#include <stdexcept>

#include <boost/math/distributions/chi_squared.hpp>
#include <boost/math/distributions/non_central_chi_squared.hpp>
#include <boost/math/special_functions/beta.hpp>

namespace rconf {

namespace {

void check_finite(const Point& p, const char* what) {
  if (p.empty()) throw std::invalid_argument(std::string(what) + ": dimension must be >= 1");
  for (double v : p) {
    if (!std::isfinite(v)) throw std::invalid_argument(std::string(what) + ": non-finite value");
  }
}

// Standard normal CDF.
double phi(double z) { return 0.5 * std::erfc(-z / std::numbers::sqrt2); }

class PointMass final : public ReferenceDistribution {
 public:
  explicit PointMass(Point c) : c_(std::move(c)) { check_finite(c_, "point-mass"); }

  std::size_t dim() const override { return c_.size(); }
  std::string_view kind() const override { return "point-mass"; }

  void sample_into(RandomStream&, std::span<double> out) const override {
    std::copy(c_.begin(), c_.end(), out.begin());
  }

  std::optional<double> ball_mass(std::span<const double> x, double r) const override {
    return euclidean_distance(x, std::span<const double>(c_)) <= r ? 1.0 : 0.0;
  }

  std::optional<double> delta_closed_form(std::span<const double> x, double) const override {
    // Mass jumps 0 -> 1 at r = ||x - c||, so delta_{P,m} = ||x - c|| for m < 1.
    return euclidean_distance(x, std::span<const double>(c_));
  }

  std::optional<double> beta_alpha_closed_form(double) const override { return 0.0; }

  double typical_scale() const override { return 1.0; }
  Point center_hint() const override { return c_; }

 private:
  Point c_;
};

class UniformInterval final : public ReferenceDistribution {
 public:
  UniformInterval(double a, double b) : a_(a), b_(b) {
    if (!std::isfinite(a) || !std::isfinite(b) || !(a < b)) {
      throw std::invalid_argument("uniform-interval: require finite a < b");
    }
  }

  std::size_t dim() const override { return 1; }
  std::string_view kind() const override { return "uniform-interval"; }

  void sample_into(RandomStream& rs, std::span<double> out) const override {
    out[0] = rs.uniform(a_, b_);
  }

  std::optional<double> ball_mass(std::span<const double> x, double r) const override {
    const double covered = std::min(x[0] + r, b_) - std::max(x[0] - r, a_);
    return std::clamp(covered / (b_ - a_), 0.0, 1.0);
  }

  std::optional<double> delta_closed_form(std::span<const double> x, double m) const override {
    // The ball of radius m L/2 fits inside the interval while x is central;
    // beyond that the near end clips and the radius grows linearly. The
    // grouping keeps the m = 1/2 case exactly |x - c|.
    const double len = b_ - a_;
    const double y = std::abs(x[0] - 0.5 * (a_ + b_));
    return std::max(m * len / 2.0, y + (m * len - len / 2.0));
  }

  std::optional<double> beta_alpha_closed_form(double alpha) const override {
    const double len = b_ - a_;
    return std::max(len / 4.0, (1.0 - alpha) * len / 2.0);
  }

  double typical_scale() const override { return (b_ - a_) / 2.0; }
  Point center_hint() const override { return {0.5 * (a_ + b_)}; }

 private:
  double a_, b_;
};

class UniformBall final : public ReferenceDistribution {
 public:
  UniformBall(Point c, double radius) : c_(std::move(c)), radius_(radius) {
    check_finite(c_, "uniform-ball");
    if (!(radius > 0.0) || !std::isfinite(radius)) {
      throw std::invalid_argument("uniform-ball: radius must be positive and finite");
    }
  }

  std::size_t dim() const override { return c_.size(); }
  std::string_view kind() const override { return "uniform-ball"; }

  void sample_into(RandomStream& rs, std::span<double> out) const override {
    // Gaussian direction, beta-distributed radius.
    const std::size_t d = c_.size();
    double norm2 = 0.0;
    do {
      norm2 = 0.0;
      for (std::size_t i = 0; i < d; ++i) {
        out[i] = rs.normal();
        norm2 += out[i] * out[i];
      }
    } while (norm2 == 0.0);
    const double rad = radius_ * std::pow(rs.uniform(), 1.0 / static_cast<double>(d));
    const double scale = rad / std::sqrt(norm2);
    for (std::size_t i = 0; i < d; ++i) out[i] = c_[i] + out[i] * scale;
  }

  std::optional<double> ball_mass(std::span<const double> x, double r) const override {
    if (r < 0.0) return 0.0;
    const double t = euclidean_distance(x, std::span<const double>(c_));
    const double d = static_cast<double>(c_.size());
    if (t + radius_ <= r) return 1.0;                                 // support swallowed
    if (t + r <= radius_) return std::pow(r / radius_, d);            // query ball inside
    if (t >= r + radius_) return 0.0;                                 // disjoint
    // Lens volume as two hyperspherical caps split by the radical plane.
    const double d1 = (t * t - r * r + radius_ * radius_) / (2.0 * t);
    const double d2 = t - d1;
    const double lens = cap_fraction(radius_, d1) +
                        std::pow(r / radius_, d) * cap_fraction(r, d2);
    return std::clamp(lens, 0.0, 1.0);
  }

  double typical_scale() const override { return radius_; }
  Point center_hint() const override { return c_; }

 private:
  // Fraction of the ball of radius rho lying at signed distance >= a from
  // the center along the cut axis.
  double cap_fraction(double rho, double a) const {
    const double d = static_cast<double>(c_.size());
    const double u = std::clamp(a / rho, -1.0, 1.0);
    const double x = 1.0 - u * u;
    const double half = 0.5 * boost::math::ibeta((d + 1.0) / 2.0, 0.5, x);
    return u >= 0.0 ? half : 1.0 - half;
  }

  Point c_;
  double radius_;
};

// Lower-triangular Cholesky factor; throws unless SPD.
std::vector<double> cholesky(const std::vector<std::vector<double>>& cov) {
  const std::size_t d = cov.size();
  for (const auto& row : cov) {
    if (row.size() != d) throw std::invalid_argument("gaussian: covariance must be square");
  }
  for (std::size_t i = 0; i < d; ++i) {
    for (std::size_t j = 0; j < i; ++j) {
      if (std::abs(cov[i][j] - cov[j][i]) > 1e-12 * (1.0 + std::abs(cov[i][j]))) {
        throw std::invalid_argument("gaussian: covariance must be symmetric");
      }
    }
  }
  std::vector<double> L(d * d, 0.0);
  for (std::size_t i = 0; i < d; ++i) {
    for (std::size_t j = 0; j <= i; ++j) {
      double s = cov[i][j];
      for (std::size_t p = 0; p < j; ++p) s -= L[i * d + p] * L[j * d + p];
      if (i == j) {
        if (!(s > 0.0)) throw std::invalid_argument("gaussian: covariance not positive definite");
        L[i * d + i] = std::sqrt(s);
      } else {
        L[i * d + j] = s / L[j * d + j];
      }
    }
  }
  return L;
}

class Gaussian final : public ReferenceDistribution {
 public:
  Gaussian(Point mean, const std::vector<std::vector<double>>& cov)
      : mean_(std::move(mean)), chol_(cholesky(cov)) {
    check_finite(mean_, "gaussian");
    if (cov.size() != mean_.size()) {
      throw std::invalid_argument("gaussian: mean/covariance dimension mismatch");
    }
    const std::size_t d = mean_.size();
    double mx = 0.0;
    for (std::size_t i = 0; i < d; ++i) mx = std::max(mx, chol_[i * d + i]);
    scale_ = mx;
    bool iso = true;
    for (std::size_t i = 0; i < d && iso; ++i) {
      for (std::size_t j = 0; j < i; ++j) iso = iso && chol_[i * d + j] == 0.0;
      iso = iso && chol_[i * d + i] == chol_[0];
    }
    iso_sd_ = iso ? chol_[0] : 0.0;
  }

  std::size_t dim() const override { return mean_.size(); }
  std::string_view kind() const override { return "gaussian"; }

  void sample_into(RandomStream& rs, std::span<double> out) const override {
    const std::size_t d = mean_.size();
    std::vector<double> z(d);
    for (std::size_t i = 0; i < d; ++i) z[i] = rs.normal();
    for (std::size_t i = 0; i < d; ++i) {
      double v = mean_[i];
      for (std::size_t j = 0; j <= i; ++j) v += chol_[i * d + j] * z[j];
      out[i] = v;
    }
  }

  std::optional<double> ball_mass(std::span<const double> x, double r) const override {
    const std::size_t d = mean_.size();
    if (d == 1) {
      const double sd = chol_[0];
      return phi((x[0] + r - mean_[0]) / sd) - phi((x[0] - r - mean_[0]) / sd);
    }
    if (iso_sd_ == 0.0) return std::nullopt;
    if (r < 0.0) return 0.0;
    // ||X - x||^2 / sd^2 is noncentral chi-squared with d dof and
    // noncentrality ||x - mean||^2 / sd^2.
    double lambda = 0.0;
    for (std::size_t i = 0; i < d; ++i) {
      const double u = (x[i] - mean_[i]) / iso_sd_;
      lambda += u * u;
    }
    const double t = (r / iso_sd_) * (r / iso_sd_);
    if (lambda == 0.0) {
      return boost::math::cdf(boost::math::chi_squared(static_cast<double>(d)), t);
    }
    return boost::math::cdf(
        boost::math::non_central_chi_squared(static_cast<double>(d), lambda), t);
  }

  double typical_scale() const override { return scale_; }
  Point center_hint() const override { return mean_; }

 private:
  Point mean_;
  std::vector<double> chol_;  // row-major lower triangle
  double scale_ = 1.0;
  double iso_sd_ = 0.0;  // common sd when the covariance is sd^2 * I, else 0
};

class GaussianMixture final : public ReferenceDistribution {
 public:
  GaussianMixture(std::vector<double> weights, std::vector<DistributionPtr> comps)
      : weights_(std::move(weights)), comps_(std::move(comps)) {
    if (comps_.empty() || weights_.size() != comps_.size()) {
      throw std::invalid_argument("gaussian-mixture: weights/components size mismatch");
    }
    double sum = 0.0;
    for (double w : weights_) {
      if (!(w >= 0.0)) throw std::invalid_argument("gaussian-mixture: negative weight");
      sum += w;
    }
    if (std::abs(sum - 1.0) > 1e-9) {
      throw std::invalid_argument("gaussian-mixture: weights must sum to 1");
    }
    for (const auto& c : comps_) {
      if (c->dim() != comps_.front()->dim()) {
        throw std::invalid_argument("gaussian-mixture: components must share a dimension");
      }
    }
  }

  std::size_t dim() const override { return comps_.front()->dim(); }
  std::string_view kind() const override { return "gaussian-mixture"; }

  void sample_into(RandomStream& rs, std::span<double> out) const override {
    const double u = rs.uniform();
    double acc = 0.0;
    for (std::size_t i = 0; i < comps_.size(); ++i) {
      acc += weights_[i];
      if (u < acc || i + 1 == comps_.size()) {
        comps_[i]->sample_into(rs, out);
        return;
      }
    }
  }

  std::optional<double> ball_mass(std::span<const double> x, double r) const override {
    double total = 0.0;
    for (std::size_t i = 0; i < comps_.size(); ++i) {
      const auto m = comps_[i]->ball_mass(x, r);
      if (!m) return std::nullopt;
      total += weights_[i] * *m;
    }
    return total;
  }

  double typical_scale() const override {
    double s = 0.0;
    Point c0 = center_hint();
    for (std::size_t i = 0; i < comps_.size(); ++i) {
      s = std::max(s, comps_[i]->typical_scale() +
                          euclidean_distance(comps_[i]->center_hint(), c0));
    }
    return s;
  }

  Point center_hint() const override {
    Point c(dim(), 0.0);
    for (std::size_t i = 0; i < comps_.size(); ++i) {
      const Point ci = comps_[i]->center_hint();
      for (std::size_t j = 0; j < c.size(); ++j) c[j] += weights_[i] * ci[j];
    }
    return c;
  }

 private:
  std::vector<double> weights_;
  std::vector<DistributionPtr> comps_;
};

class StudentT final : public ReferenceDistribution {
 public:
  StudentT(double df, std::size_t d) : df_(df), d_(d) {
    if (!(df > 0.0) || !std::isfinite(df)) {
      throw std::invalid_argument("student-t: df must be positive and finite");
    }
    if (d == 0) throw std::invalid_argument("student-t: dimension must be >= 1");
  }

  std::size_t dim() const override { return d_; }
  std::string_view kind() const override { return "student-t"; }

  void sample_into(RandomStream& rs, std::span<double> out) const override {
    // Normal scaled by an inverse-chi draw shared across coordinates.
    const double w = 2.0 * rs.gamma(df_ / 2.0);  // chi-squared with df_ dof
    const double s = std::sqrt(df_ / w);
    for (std::size_t i = 0; i < d_; ++i) out[i] = s * rs.normal();
  }

  double typical_scale() const override {
    return df_ > 2.0 ? std::sqrt(df_ / (df_ - 2.0)) : 3.0;
  }
  Point center_hint() const override { return Point(d_, 0.0); }

 private:
  double df_;
  std::size_t d_;
};

class Contaminated final : public ReferenceDistribution {
 public:
  Contaminated(DistributionPtr base, double fraction, DistributionPtr outlier)
      : base_(std::move(base)), fraction_(fraction), outlier_(std::move(outlier)) {
    if (!base_ || !outlier_) throw std::invalid_argument("contaminated: null component");
    if (!(fraction >= 0.0) || !(fraction < 0.5)) {
      throw std::invalid_argument("contaminated: fraction must lie in [0, 1/2)");
    }
    if (base_->dim() != outlier_->dim()) {
      throw std::invalid_argument("contaminated: base/outlier dimension mismatch");
    }
  }

  std::size_t dim() const override { return base_->dim(); }
  std::string_view kind() const override { return "contaminated"; }

  void sample_into(RandomStream& rs, std::span<double> out) const override {
    if (rs.uniform() < fraction_) {
      outlier_->sample_into(rs, out);
    } else {
      base_->sample_into(rs, out);
    }
  }

  std::optional<double> ball_mass(std::span<const double> x, double r) const override {
    const auto mb = base_->ball_mass(x, r);
    const auto mo = outlier_->ball_mass(x, r);
    if (!mb || !mo) return std::nullopt;
    return (1.0 - fraction_) * *mb + fraction_ * *mo;
  }

  double typical_scale() const override { return base_->typical_scale(); }
  Point center_hint() const override { return base_->center_hint(); }

  double fraction() const { return fraction_; }

 private:
  DistributionPtr base_;
  double fraction_;
  DistributionPtr outlier_;
};

}  // namespace

DistributionPtr make_point_mass(Point center) {
  return std::make_shared<PointMass>(std::move(center));
}

DistributionPtr make_uniform_interval(double a, double b) {
  return std::make_shared<UniformInterval>(a, b);
}

DistributionPtr make_uniform_ball(Point center, double radius) {
  return std::make_shared<UniformBall>(std::move(center), radius);
}

DistributionPtr make_gaussian(Point mean, const std::vector<std::vector<double>>& cov) {
  return std::make_shared<Gaussian>(std::move(mean), cov);
}

DistributionPtr make_gaussian(Point mean, double sd) {
  if (!(sd > 0.0)) throw std::invalid_argument("gaussian: sd must be positive");
  const std::size_t d = mean.size();
  std::vector<std::vector<double>> cov(d, std::vector<double>(d, 0.0));
  for (std::size_t i = 0; i < d; ++i) cov[i][i] = sd * sd;
  return std::make_shared<Gaussian>(std::move(mean), cov);
}

DistributionPtr make_gaussian_mixture(std::vector<double> weights,
                                      std::vector<DistributionPtr> components) {
  return std::make_shared<GaussianMixture>(std::move(weights), std::move(components));
}

DistributionPtr make_student_t(double df, std::size_t dim) {
  return std::make_shared<StudentT>(df, dim);
}

DistributionPtr make_contaminated(DistributionPtr base, double fraction, DistributionPtr outlier) {
  return std::make_shared<Contaminated>(std::move(base), fraction, std::move(outlier));
}

Dataset sample(const ReferenceDistribution& dist, std::size_t n, std::uint64_t seed) {
  RandomStream rs(seed);
  Dataset out(dist.dim());
  std::vector<double> buf(dist.dim());
  for (std::size_t i = 0; i < n; ++i) {
    dist.sample_into(rs, buf);
    out.add(std::span<const double>(buf));
  }
  return out;
}

}  // namespace rconf

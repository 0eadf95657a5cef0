#include "spinprobe/fit.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>

namespace spinprobe {

namespace lorentz_model {

double value(double f, const RVector& p) {
  double dip = 0.0;
  for (Eigen::Index k = 1; k + 2 < p.size(); k += 3) dip += p(k) * lorentzian(f, p(k + 2), p(k + 1));
  return p(0) * (1.0 - dip);
}

void gradient(double f, const RVector& p, RVector& grad) {
  grad.resize(p.size());
  const double base = p(0);
  double dip = 0.0;
  for (Eigen::Index k = 1; k + 2 < p.size(); k += 3) {
    const double c = p(k), h = 0.5 * p(k + 1), d = f - p(k + 2);
    const double q = d * d + h * h;
    const double l = h * h / q;
    dip += c * l;
    grad(k) = -base * l;
    grad(k + 1) = -base * c * h * d * d / (q * q);
    grad(k + 2) = -base * c * 2.0 * d * h * h / (q * q);
  }
  grad(0) = 1.0 - dip;
}

}  // namespace lorentz_model

namespace {

struct Seeds {
  double baseline;
  std::vector<double> centers, fwhm, contrast;
};

double median(std::vector<double> v) {
  const auto mid = v.begin() + static_cast<std::ptrdiff_t>(v.size() / 2);
  std::nth_element(v.begin(), mid, v.end());
  return *mid;
}

Seeds seed_parameters(const Spectrum& s, std::size_t n_peaks, std::optional<std::span<const double>> centers) {
  const std::size_t n = s.counts.size();
  const double step = (s.frequencies.back() - s.frequencies.front()) / static_cast<double>(n - 1);

  std::vector<double> smooth(n);
  for (std::size_t k = 0; k < n; ++k) {
    const std::size_t lo = k == 0 ? 0 : k - 1, hi = std::min(n - 1, k + 1);
    double sum = 0.0;
    for (std::size_t j = lo; j <= hi; ++j) sum += s.counts[j];
    smooth[k] = sum / static_cast<double>(hi - lo + 1);
  }

  Seeds seeds;
  seeds.baseline = median(s.counts);
  const double baseline = seeds.baseline;

  auto nearest_index = [&](double f) {
    const auto it = std::lower_bound(s.frequencies.begin(), s.frequencies.end(), f);
    std::size_t k = static_cast<std::size_t>(it - s.frequencies.begin());
    if (k >= n) k = n - 1;
    if (k > 0 && std::abs(s.frequencies[k - 1] - f) < std::abs(s.frequencies[k] - f)) --k;
    return k;
  };
  // Full width at half depth of the dip around index k, at least two steps.
  auto dip_width = [&](std::size_t k) {
    const double half = 0.5 * (baseline + smooth[k]);
    std::size_t lo = k, hi = k;
    while (lo > 0 && smooth[lo] < half) --lo;
    while (hi + 1 < n && smooth[hi] < half) ++hi;
    return std::max(2.0 * step, s.frequencies[hi] - s.frequencies[lo]);
  };

  std::vector<std::size_t> picked;
  if (centers) {
    for (double c : *centers) picked.push_back(nearest_index(c));
    seeds.centers.assign(centers->begin(), centers->end());
  } else {
    std::vector<std::size_t> minima;
    for (std::size_t k = 0; k < n; ++k) {
      const bool left = k == 0 || smooth[k] <= smooth[k - 1];
      const bool right = k + 1 == n || smooth[k] <= smooth[k + 1];
      if (left && right) minima.push_back(k);
    }
    std::stable_sort(minima.begin(), minima.end(), [&](std::size_t a, std::size_t b) { return smooth[a] < smooth[b]; });
    const double exclusion = minima.empty() ? 0.0 : dip_width(minima.front());
    for (std::size_t k : minima) {
      if (picked.size() == n_peaks) break;
      const bool clear = std::all_of(picked.begin(), picked.end(), [&](std::size_t j) {
        return std::abs(s.frequencies[j] - s.frequencies[k]) >= exclusion;
      });
      if (clear) picked.push_back(k);
    }
    if (picked.empty()) picked.push_back(static_cast<std::size_t>(
        std::min_element(smooth.begin(), smooth.end()) - smooth.begin()));
    for (std::size_t k : picked) seeds.centers.push_back(s.frequencies[k]);
  }

  // Pad missing peaks next to the deepest dip and spread coincident seeds by one step.
  while (seeds.centers.size() < n_peaks) {
    seeds.centers.push_back(seeds.centers.front());
    picked.push_back(picked.front());
  }
  for (std::size_t a = 1; a < seeds.centers.size(); ++a) {
    const double original = seeds.centers[a];
    auto collides = [&] {
      for (std::size_t b = 0; b < a; ++b)
        if (std::abs(seeds.centers[a] - seeds.centers[b]) < 0.5 * step) return true;
      return false;
    };
    for (int attempt = 1; collides(); ++attempt)
      seeds.centers[a] = original + static_cast<double>((attempt + 1) / 2) * step * (attempt % 2 == 1 ? 1.0 : -1.0);
  }

  std::vector<std::size_t> share(seeds.centers.size(), 1);
  for (std::size_t a = 0; a < picked.size(); ++a)
    for (std::size_t b = 0; b < picked.size(); ++b)
      if (a != b && picked[a] == picked[b]) ++share[a];
  for (std::size_t a = 0; a < seeds.centers.size(); ++a) {
    const std::size_t k = picked[a];
    const double depth = std::max(1e-3, (baseline - smooth[k]) / baseline);
    seeds.contrast.push_back(depth / static_cast<double>(share[a]));
    seeds.fwhm.push_back(dip_width(k));
  }
  return seeds;
}

}  // namespace

FitResult fit_lorentzians(const Spectrum& spectrum, std::size_t n_peaks,
                          std::optional<std::span<const double>> initial_centers, const FitOptions& opts) {
  if (n_peaks < 1) throw std::invalid_argument("fit: n_peaks must be >= 1");
  if (spectrum.counts.size() != spectrum.frequencies.size()) throw std::invalid_argument("fit: malformed spectrum");
  if (spectrum.counts.size() < 5 * n_peaks) throw std::invalid_argument("fit: need at least 5 points per peak");
  if (initial_centers && initial_centers->size() != n_peaks)
    throw std::invalid_argument("fit: initial guess count differs from n_peaks");

  const auto n = static_cast<Eigen::Index>(spectrum.counts.size());
  const auto np = static_cast<Eigen::Index>(1 + 3 * n_peaks);
  const Seeds seeds = seed_parameters(spectrum, n_peaks, initial_centers);

  RVector p(np);
  p(0) = seeds.baseline;
  for (std::size_t k = 0; k < n_peaks; ++k) {
    const auto o = static_cast<Eigen::Index>(1 + 3 * k);
    p(o) = seeds.contrast[k];
    p(o + 1) = seeds.fwhm[k];
    p(o + 2) = seeds.centers[k];
  }

  RMatrix jac(n, np);
  RVector resid(n), grad;
  auto evaluate = [&](const RVector& params, bool with_jacobian) {
    double cost = 0.0;
    for (Eigen::Index i = 0; i < n; ++i) {
      const double f = spectrum.frequencies[static_cast<std::size_t>(i)];
      const double r = spectrum.counts[static_cast<std::size_t>(i)] - lorentz_model::value(f, params);
      if (with_jacobian) {
        resid(i) = r;
        lorentz_model::gradient(f, params, grad);
        jac.row(i) = grad.transpose();
      }
      cost += r * r;
    }
    return cost;
  };

  FitResult out;
  double cost = evaluate(p, true);
  double mu = 1e-3;
  bool converged = false;
  int it = 0;
  for (; it < opts.max_iterations && !converged; ++it) {
    if (cost == 0.0) {
      converged = true;
      break;
    }
    const RMatrix jtj = jac.transpose() * jac;
    const RVector jtr = jac.transpose() * resid;
    bool accepted = false;
    while (!accepted) {
      RMatrix damped = jtj;
      for (Eigen::Index k = 0; k < np; ++k) damped(k, k) += mu * std::max(jtj(k, k), 1e-300);
      const RVector delta = damped.ldlt().solve(jtr);
      const RVector trial = p + delta;
      const double trial_cost = delta.allFinite() ? evaluate(trial, false) : INFINITY;
      if (trial_cost < cost) {
        double rel = 0.0;
        for (Eigen::Index k = 0; k < np; ++k) rel = std::max(rel, std::abs(delta(k)) / std::max(std::abs(trial(k)), 1e-12));
        p = trial;
        cost = evaluate(p, true);
        mu = std::max(mu / 3.0, 1e-12);
        accepted = true;
        if (rel < opts.relative_step) converged = true;
      } else {
        mu *= 4.0;
        if (mu > 1e16) {
          // No downhill step left at working precision: the current point is a minimum.
          converged = true;
          break;
        }
      }
    }
  }

  out.iterations = it;
  out.residual_norm = std::sqrt(cost);
  out.baseline = p(0);

  const RMatrix jtj = jac.transpose() * jac;
  const double dof = static_cast<double>(std::max<Eigen::Index>(1, n - np));
  const double sigma2 = cost / dof;
  Eigen::LDLT<RMatrix> ldlt(jtj);
  RMatrix cov = ldlt.solve(RMatrix::Identity(np, np));
  const double f_lo = spectrum.frequencies.front(), f_hi = spectrum.frequencies.back();
  bool inside = true;
  for (std::size_t k = 0; k < n_peaks; ++k) {
    const auto o = static_cast<Eigen::Index>(1 + 3 * k);
    PeakEstimate pk;
    pk.contrast = p(o);
    pk.fwhm = std::abs(p(o + 1));
    pk.center = p(o + 2);
    const double var = sigma2 * cov(o + 2, o + 2);
    pk.center_stderr = var >= 0.0 && std::isfinite(var) ? std::sqrt(var) : INFINITY;
    if (!(pk.center >= f_lo && pk.center <= f_hi)) inside = false;
    out.peaks.push_back(pk);
  }
  std::sort(out.peaks.begin(), out.peaks.end(), [](const auto& a, const auto& b) { return a.center < b.center; });
  out.converged = converged && inside && p.allFinite();
  return out;
}

}  // namespace spinprobe

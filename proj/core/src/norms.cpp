#include <algorithm>
#include <cmath>
#include <sstream>

#include "capnet/error.hpp"
#include "capnet/linalg.hpp"

namespace capnet {

NormKind NormKind::schatten(double p) {
  if (std::isnan(p) || p < 1.0) {
    throw InvalidArgument("schatten norm requires p >= 1");
  }
  if (std::isinf(p)) return spectral();
  if (p > kMaxSchattenP) {
    throw InvalidArgument(
        "schatten p above 64 is numerically indistinguishable from the "
        "spectral norm; use the spectral norm instead");
  }
  if (p == 2.0) return frobenius();
  return NormKind(Tag::schatten, p);
}

std::string NormKind::name() const {
  switch (tag_) {
    case Tag::spectral:
      return "spectral";
    case Tag::frobenius:
      return "frobenius";
    case Tag::schatten: {
      std::ostringstream os;
      os << "schatten:" << p_;
      return os.str();
    }
    case Tag::rows_l2_sum:
      return "rows-l2-sum";
    case Tag::rows_l1_max:
      return "rows-l1-max";
  }
  return "unknown";
}

NormKind parse_norm_kind(const std::string& text) {
  if (text == "spectral") return NormKind::spectral();
  if (text == "frobenius") return NormKind::frobenius();
  if (text == "rows-l2-sum") return NormKind::rows_l2_sum();
  if (text == "rows-l1-max") return NormKind::rows_l1_max();
  const std::string prefix = "schatten:";
  if (text.rfind(prefix, 0) == 0) {
    const std::string arg = text.substr(prefix.size());
    if (arg == "inf") return NormKind::spectral();
    std::size_t used = 0;
    double p = 0.0;
    try {
      p = std::stod(arg, &used);
    } catch (const std::exception&) {
      used = 0;
    }
    if (used == 0 || used != arg.size()) {
      throw InvalidArgument("invalid schatten exponent '" + arg + "'");
    }
    return NormKind::schatten(p);
  }
  throw InvalidArgument("unknown norm kind '" + text + "'");
}

double lp_norm(std::span<const double> v, double p) {
  double scale = 0.0;
  for (double x : v) scale = std::max(scale, std::abs(x));
  if (scale == 0.0 || std::isinf(p)) return scale;
  if (p == 1.0) {
    double s = 0.0;
    for (double x : v) s += std::abs(x);
    return s;
  }
  double s = 0.0;
  for (double x : v) s += std::pow(std::abs(x) / scale, p);
  return scale * std::pow(s, 1.0 / p);
}

double matrix_norm(const Matrix& w, NormKind kind) {
  switch (kind.tag()) {
    case NormKind::Tag::frobenius:
      return norm2(w.data());
    case NormKind::Tag::spectral: {
      const Vector s = singular_values(w);
      return s.front();
    }
    case NormKind::Tag::schatten:
      return lp_norm(singular_values(w), kind.p());
    case NormKind::Tag::rows_l2_sum: {
      double s = 0.0;
      for (std::size_t i = 0; i < w.rows(); ++i) s += norm2(w.row(i));
      return s;
    }
    case NormKind::Tag::rows_l1_max: {
      double m = 0.0;
      for (std::size_t i = 0; i < w.rows(); ++i) m = std::max(m, lp_norm(w.row(i), 1.0));
      return m;
    }
  }
  throw InvalidArgument("unknown norm kind");
}

Rank1Approximation rank1_approx(const Matrix& w) {
  const SvdResult d = svd(w);
  Rank1Approximation r;
  r.leading_singular = d.singular.front();
  r.spectral_error = d.singular.size() > 1 ? d.singular[1] : 0.0;
  if (r.leading_singular == 0.0) {
    r.approx = Matrix(w.rows(), w.cols());
    r.u.assign(w.rows(), 0.0);
    r.v.assign(w.cols(), 0.0);
    r.u[0] = 1.0;
    r.v[0] = 1.0;
    r.spectral_error = 0.0;
    return r;
  }
  r.u = d.left.column(0);
  r.v = d.right.column(0);
  r.approx = outer(r.leading_singular, r.u, r.v);
  return r;
}

}  // namespace capnet

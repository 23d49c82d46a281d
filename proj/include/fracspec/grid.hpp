#ifndef FRACSPEC_GRID_HPP
#define FRACSPEC_GRID_HPP

#include <algorithm>
#include <cmath>
#include <fstream>
#include <functional>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

#include "fracspec/numcore.hpp"

namespace fracspec {

/// Uniform grid of n interior nodes on (a, b); functions are extended by zero
/// outside [a, b], so the endpoint values are 0.
class Grid1D {
public:
  Grid1D(double a, double b, Eigen::Index n) : a_(a), b_(b), n_(n)
  {
    if (!(a < b) || !std::isfinite(a) || !std::isfinite(b))
      throw error(ErrorKind::InvalidArgument, "grid endpoints must satisfy a < b");
    if (n < 4)
      throw error(ErrorKind::InvalidArgument, "grid needs at least 4 interior nodes");
  }

  double a() const { return a_; }
  double b() const { return b_; }
  Eigen::Index n() const { return n_; }
  double h() const { return (b_ - a_) / static_cast<double>(n_ + 1); }
  double length() const { return b_ - a_; }

  /// i-th interior node, i in [0, n).
  double node(Eigen::Index i) const { return a_ + static_cast<double>(i + 1) * h(); }

  RealVector nodes() const
  {
    RealVector x(n_);
    for (Eigen::Index i = 0; i < n_; ++i)
      x[i] = node(i);
    return x;
  }

  /// Trapezoidal weights h (endpoint values vanish).
  InnerProduct inner_product() const { return InnerProduct::uniform(n_, h()); }

  bool operator==(const Grid1D& o) const { return a_ == o.a_ && b_ == o.b_ && n_ == o.n_; }

private:
  double a_;
  double b_;
  Eigen::Index n_;
};

/// Samples of a function on the interior nodes of a grid.
struct GridFunction {
  Grid1D grid;
  ComplexVector values;

  GridFunction(Grid1D g, ComplexVector v) : grid(g), values(std::move(v))
  {
    if (values.size() != grid.n())
      throw error(ErrorKind::InvalidArgument, "grid function length does not match the grid");
  }

  template <typename F>
  static GridFunction sample(const Grid1D& g, F&& f)
  {
    ComplexVector v(g.n());
    for (Eigen::Index i = 0; i < g.n(); ++i)
      v[i] = f(g.node(i));
    return GridFunction(g, std::move(v));
  }
};

/// Dense operator on a grid together with the inner product it acts in.
struct OperatorMatrix {
  Grid1D grid;
  ComplexMatrix matrix;
  InnerProduct ip;

  OperatorMatrix(Grid1D g, ComplexMatrix m) : OperatorMatrix(g, std::move(m), g.inner_product()) {}

  OperatorMatrix(Grid1D g, ComplexMatrix m, InnerProduct p)
      : grid(g), matrix(std::move(m)), ip(std::move(p))
  {
    if (matrix.rows() != grid.n() || matrix.cols() != grid.n() || ip.size() != grid.n())
      throw error(ErrorKind::InvalidArgument, "operator matrix dimensions do not match the grid");
  }

  GridFunction apply(const GridFunction& f) const { return GridFunction(grid, matrix * f.values); }
};

/// Real coefficient function given by a textual spec:
///   const:c | sin | cos | poly:c0,c1,... | wpow:c,p  (c (1+|x|)^p) | csv:path  (x,value rows)
class Coefficient {
public:
  Coefficient(std::string spec, std::function<double(double)> fn)
      : spec_(std::move(spec)), fn_(std::move(fn))
  {
  }

  static Coefficient constant(double c)
  {
    std::ostringstream os;
    os.precision(17);
    os << "const:" << c;
    return Coefficient(os.str(), [c](double) { return c; });
  }

  static Coefficient parse(const std::string& spec)
  {
    const auto colon = spec.find(':');
    const std::string head = spec.substr(0, colon);
    const std::string tail = colon == std::string::npos ? std::string() : spec.substr(colon + 1);
    if (head == "sin")
      return Coefficient(spec, [](double x) { return std::sin(x); });
    if (head == "cos")
      return Coefficient(spec, [](double x) { return std::cos(x); });
    if (head == "const") {
      const auto c = parse_list(tail, spec);
      if (c.size() != 1)
        throw error(ErrorKind::InvalidArgument, "const coefficient takes one value: " + spec);
      const double v = c[0];
      return Coefficient(spec, [v](double) { return v; });
    }
    if (head == "poly") {
      const auto c = parse_list(tail, spec);
      if (c.empty())
        throw error(ErrorKind::InvalidArgument, "poly coefficient needs coefficients: " + spec);
      return Coefficient(spec, [c](double x) {
        double acc = 0.0;
        for (auto it = c.rbegin(); it != c.rend(); ++it)
          acc = acc * x + *it;
        return acc;
      });
    }
    if (head == "wpow") {
      const auto c = parse_list(tail, spec);
      if (c.size() != 2)
        throw error(ErrorKind::InvalidArgument, "wpow coefficient takes c,p: " + spec);
      const double s = c[0], p = c[1];
      return Coefficient(spec, [s, p](double x) { return s * std::pow(1.0 + std::abs(x), p); });
    }
    if (head == "csv")
      return from_csv(spec, tail);
    throw error(ErrorKind::InvalidArgument, "unknown coefficient spec: " + spec);
  }

  double operator()(double x) const { return fn_(x); }
  const std::string& spec() const { return spec_; }

  RealVector sample(const Grid1D& g) const
  {
    RealVector v(g.n());
    for (Eigen::Index i = 0; i < g.n(); ++i)
      v[i] = fn_(g.node(i));
    return v;
  }

  /// Values at the n half nodes x_i + h/2, i in [0, n).
  RealVector sample_half(const Grid1D& g) const
  {
    RealVector v(g.n());
    for (Eigen::Index i = 0; i < g.n(); ++i)
      v[i] = fn_(g.node(i) + 0.5 * g.h());
    return v;
  }

private:
  static std::vector<double> parse_list(const std::string& s, const std::string& spec)
  {
    std::vector<double> out;
    std::stringstream ss(s);
    std::string item;
    while (std::getline(ss, item, ',')) {
      try {
        std::size_t used = 0;
        out.push_back(std::stod(item, &used));
        if (used != item.size())
          throw std::invalid_argument(item);
      } catch (const std::exception&) {
        throw error(ErrorKind::InvalidArgument, "bad number '" + item + "' in coefficient " + spec);
      }
    }
    return out;
  }

  static Coefficient from_csv(const std::string& spec, const std::string& path)
  {
    std::ifstream in(path);
    if (!in)
      throw error(ErrorKind::InvalidArgument, "cannot open coefficient file " + path);
    std::vector<std::pair<double, double>> pts;
    std::string line;
    while (std::getline(in, line)) {
      if (line.empty() || line[0] == '#')
        continue;
      const auto v = parse_list(line, spec);
      if (v.size() != 2)
        throw error(ErrorKind::InvalidArgument, "coefficient csv rows must be x,value: " + path);
      pts.emplace_back(v[0], v[1]);
    }
    if (pts.size() < 2)
      throw error(ErrorKind::InvalidArgument, "coefficient csv needs at least two rows: " + path);
    std::sort(pts.begin(), pts.end());
    return Coefficient(spec, [pts](double x) {
      if (x <= pts.front().first)
        return pts.front().second;
      if (x >= pts.back().first)
        return pts.back().second;
      const auto it = std::upper_bound(pts.begin(), pts.end(), std::make_pair(x, -HUGE_VAL));
      const auto& [x1, y1] = *it;
      const auto& [x0, y0] = *(it - 1);
      return y0 + (y1 - y0) * (x - x0) / (x1 - x0);
    });
  }

  std::string spec_;
  std::function<double(double)> fn_;
};

} // namespace fracspec

#endif // FRACSPEC_GRID_HPP

#include "vem/poly.hpp"

#include <cassert>
#include <cmath>

namespace vem {

std::vector<MultiIndex> multi_indices(int r)
{
    std::vector<MultiIndex> out;
    out.reserve(basis_dim(r));
    for (int d = 0; d <= r; ++d)
        for (int k = 0; k <= d; ++k) out.push_back({d - k, k});
    return out;
}

std::vector<MultiIndex> multi_indices_of_order(int d)
{
    std::vector<MultiIndex> out;
    for (int k = 0; k <= d; ++k) out.push_back({d - k, k});
    return out;
}

double binomial(int n, int k)
{
    if (k < 0 || k > n) return 0.0;
    double b = 1.0;
    for (int i = 1; i <= k; ++i) b = b * (n - k + i) / i;
    return b;
}

double falling_factorial(int n, int k)
{
    if (k > n) return 0.0;
    double f = 1.0;
    for (int i = 0; i < k; ++i) f *= n - i;
    return f;
}

Eigen::VectorXd ScaledMonomials::eval(const Point& p, MultiIndex deriv) const
{
    const int n = size();
    Eigen::VectorXd out = Eigen::VectorXd::Zero(n);
    const double xi = (p.x() - center_.x()) / h_;
    const double eta = (p.y() - center_.y()) / h_;
    // Powers up to degree_ for both scaled coordinates.
    Eigen::VectorXd px(degree_ + 1), py(degree_ + 1);
    px[0] = py[0] = 1.0;
    for (int k = 1; k <= degree_; ++k) {
        px[k] = px[k - 1] * xi;
        py[k] = py[k - 1] * eta;
    }
    const double scale = std::pow(h_, -deriv.order());
    int idx = 0;
    for (int d = 0; d <= degree_; ++d)
        for (int k = 0; k <= d; ++k, ++idx) {
            const int ax = d - k, ay = k;
            if (ax < deriv.x || ay < deriv.y) continue;
            out[idx] = scale * falling_factorial(ax, deriv.x) * falling_factorial(ay, deriv.y) * px[ax - deriv.x]
                * py[ay - deriv.y];
        }
    return out;
}

double ScaledMonomials::eval(const Eigen::VectorXd& coeffs, const Point& p, MultiIndex deriv) const
{
    assert(coeffs.size() == size());
    return coeffs.dot(eval(p, deriv));
}

Eigen::MatrixXd derivative_matrix(int r, MultiIndex nu, double h)
{
    const int rows = basis_dim(r - nu.order());
    Eigen::MatrixXd m = Eigen::MatrixXd::Zero(rows, basis_dim(r));
    if (rows == 0) return m;
    const double scale = std::pow(h, -nu.order());
    int col = 0;
    for (const MultiIndex& a : multi_indices(r)) {
        if (a.x >= nu.x && a.y >= nu.y) {
            const int row = multi_index_position({a.x - nu.x, a.y - nu.y});
            m(row, col) = scale * falling_factorial(a.x, nu.x) * falling_factorial(a.y, nu.y);
        }
        ++col;
    }
    return m;
}

Eigen::MatrixXd laplacian_power(int r, int s, double h)
{
    Eigen::MatrixXd out = Eigen::MatrixXd::Identity(basis_dim(r), basis_dim(r));
    for (int k = 0, deg = r; k < s; ++k, deg -= 2) {
        const Eigen::MatrixXd lap = derivative_matrix(deg, {2, 0}, h) + derivative_matrix(deg, {0, 2}, h);
        out = (lap * out).eval();
    }
    return out;
}

Eigen::VectorXd directional_weights(const Point& t, const Point& n, int m, int j)
{
    const int d = m + j;
    Eigen::VectorXd w = Eigen::VectorXd::Zero(d + 1);
    for (int a = 0; a <= m; ++a)
        for (int b = 0; b <= j; ++b) {
            const int nx = a + b;
            const double c = binomial(m, a) * binomial(j, b) * std::pow(t.x(), a) * std::pow(t.y(), m - a)
                * std::pow(n.x(), b) * std::pow(n.y(), j - b);
            w[d - nx] += c; // position of (nx, d - nx) within the order-d block
        }
    return w;
}

// ---------------------------------------------------------------------------

Polynomial2D::Polynomial2D(int degree)
    : degree_(degree), c_(Eigen::MatrixXd::Zero(degree + 1, degree + 1))
{
}

Polynomial2D Polynomial2D::from_terms(int degree, const std::vector<std::pair<MultiIndex, double>>& terms)
{
    Polynomial2D p(degree);
    for (const auto& [nu, c] : terms) {
        assert(nu.order() <= degree);
        p.c_(nu.x, nu.y) += c;
    }
    return p;
}

Polynomial2D Polynomial2D::bubble()
{
    // (1-x)^2 x^2 = x^2 - 2x^3 + x^4
    const double b[5] = {0.0, 0.0, 1.0, -2.0, 1.0};
    Polynomial2D p(8);
    for (int i = 0; i <= 4; ++i)
        for (int j = 0; j <= 4; ++j) p.c_(i, j) = b[i] * b[j];
    return p;
}

double Polynomial2D::eval(const Point& p, MultiIndex deriv) const
{
    double sum = 0.0;
    for (int i = deriv.x; i <= degree_; ++i) {
        const double fx = falling_factorial(i, deriv.x) * std::pow(p.x(), i - deriv.x);
        for (int j = deriv.y; i + j <= degree_; ++j) {
            const double c = c_(i, j);
            if (c == 0.0) continue;
            sum += c * fx * falling_factorial(j, deriv.y) * std::pow(p.y(), j - deriv.y);
        }
    }
    return sum;
}

Polynomial2D Polynomial2D::derivative(MultiIndex nu) const
{
    Polynomial2D out(std::max(0, degree_ - nu.order()));
    for (int i = nu.x; i <= degree_; ++i)
        for (int j = nu.y; i + j <= degree_; ++j)
            out.c_(i - nu.x, j - nu.y) += c_(i, j) * falling_factorial(i, nu.x) * falling_factorial(j, nu.y);
    return out;
}

Polynomial2D Polynomial2D::laplacian() const { return derivative({2, 0}) + derivative({0, 2}); }

Polynomial2D Polynomial2D::operator+(const Polynomial2D& o) const
{
    Polynomial2D out(std::max(degree_, o.degree_));
    out.c_.topLeftCorner(c_.rows(), c_.cols()) += c_;
    out.c_.topLeftCorner(o.c_.rows(), o.c_.cols()) += o.c_;
    return out;
}

Polynomial2D Polynomial2D::operator*(double s) const
{
    Polynomial2D out = *this;
    out.c_ *= s;
    return out;
}

SmoothField as_field(const Polynomial2D& p)
{
    return [p](const Point& x, MultiIndex nu) { return p.eval(x, nu); };
}

double shifted_legendre(int m, double t)
{
    const double x = 2.0 * t - 1.0;
    if (m == 0) return 1.0;
    double p0 = 1.0, p1 = x;
    for (int k = 1; k < m; ++k) {
        const double p2 = ((2.0 * k + 1.0) * x * p1 - k * p0) / (k + 1.0);
        p0 = p1;
        p1 = p2;
    }
    return p1;
}

} // namespace vem

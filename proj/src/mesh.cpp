#include "lcnf/mesh.hpp"

#include <algorithm>
#include <cmath>

namespace lcnf {

void gauss_legendre_01(int n, std::vector<double>& nodes, std::vector<double>& weights) {
    nodes.assign(n, 0.0);
    weights.assign(n, 0.0);
    for (int i = 0; i < n; ++i) {
        // Newton iteration from the Chebyshev estimate, on [-1,1].
        double x = std::cos(M_PI * (i + 0.75) / (n + 0.5));
        for (int it = 0; it < 100; ++it) {
            double p0 = 1.0, p1 = x;
            for (int k = 2; k <= n; ++k) {
                const double p2 = ((2.0 * k - 1.0) * x * p1 - (k - 1.0) * p0) / k;
                p0 = p1;
                p1 = p2;
            }
            const double dp = n * (x * p1 - p0) / (x * x - 1.0);
            const double dx = p1 / dp;
            x -= dx;
            if (std::abs(dx) < 1e-15) break;
        }
        double p0 = 1.0, p1 = x;
        for (int k = 2; k <= n; ++k) {
            const double p2 = ((2.0 * k - 1.0) * x * p1 - (k - 1.0) * p0) / k;
            p0 = p1;
            p1 = p2;
        }
        const double dp = n * (x * p1 - p0) / (x * x - 1.0);
        nodes[n - 1 - i] = 0.5 * (1.0 + x);
        weights[n - 1 - i] = 1.0 / ((1.0 - x * x) * dp * dp);
    }
    std::sort(nodes.begin(), nodes.end());
}

namespace {

Vec lagrangeAt(const std::vector<double>& pts, double s) {
    const int m = static_cast<int>(pts.size());
    Vec w(m);
    for (int i = 0; i < m; ++i) {
        double v = 1.0;
        for (int j = 0; j < m; ++j)
            if (j != i) v *= (s - pts[j]) / (pts[i] - pts[j]);
        w[i] = v;
    }
    return w;
}

Vec lagrangeDerivAt(const std::vector<double>& pts, double s) {
    const int m = static_cast<int>(pts.size());
    Vec w = Vec::Zero(m);
    for (int i = 0; i < m; ++i) {
        double sum = 0.0;
        for (int k = 0; k < m; ++k) {
            if (k == i) continue;
            double v = 1.0 / (pts[i] - pts[k]);
            for (int j = 0; j < m; ++j)
                if (j != i && j != k) v *= (s - pts[j]) / (pts[i] - pts[j]);
            sum += v;
        }
        w[i] = sum;
    }
    return w;
}

}  // namespace

Mesh::Mesh(std::vector<double> breaks, int ncol)
    : ntst_(static_cast<int>(breaks.size()) - 1), ncol_(ncol), breaks_(std::move(breaks)) {
    if (ntst_ < 1 || ncol_ < 2) throw LcnfError("mesh needs ntst >= 1, ncol >= 2");
    if (std::abs(breaks_.front()) > 1e-14 || std::abs(breaks_.back() - 1.0) > 1e-14)
        throw LcnfError("mesh breakpoints must span [0,1]");
    for (int j = 0; j < ntst_; ++j)
        if (breaks_[j + 1] <= breaks_[j])
            throw LcnfError("mesh breakpoints must be strictly increasing");

    gauss_legendre_01(ncol_, gauss_nodes_, gauss_weights_);
    local_points_.resize(ncol_ + 1);
    for (int i = 0; i <= ncol_; ++i) local_points_[i] = double(i) / ncol_;

    Lg_.resize(ncol_, ncol_ + 1);
    Lgd_.resize(ncol_, ncol_ + 1);
    for (int g = 0; g < ncol_; ++g) {
        Lg_.row(g) = lagrangeAt(local_points_, gauss_nodes_[g]).transpose();
        Lgd_.row(g) = lagrangeDerivAt(local_points_, gauss_nodes_[g]).transpose();
    }
}

std::shared_ptr<const Mesh> Mesh::uniform(int ntst, int ncol) {
    std::vector<double> b(ntst + 1);
    for (int j = 0; j <= ntst; ++j) b[j] = double(j) / ntst;
    return std::shared_ptr<const Mesh>(new Mesh(std::move(b), ncol));
}

std::shared_ptr<const Mesh> Mesh::withBreaks(std::vector<double> breaks, int ncol) {
    return std::shared_ptr<const Mesh>(new Mesh(std::move(breaks), ncol));
}

double Mesh::repSigma(int idx) const {
    const int j = std::min(idx / ncol_, ntst_ - 1);
    const int i = idx - j * ncol_;
    return breaks_[j] + intervalLen(j) * local_points_[i];
}

double Mesh::gaussSigma(int j, int g) const {
    return breaks_[j] + intervalLen(j) * gauss_nodes_[g];
}

double Mesh::gaussWeight(int j, int g) const {
    return intervalLen(j) * gauss_weights_[g];
}

Vec Mesh::lagrange(double s) const { return lagrangeAt(local_points_, s); }
Vec Mesh::lagrangeDeriv(double s) const { return lagrangeDerivAt(local_points_, s); }

int Mesh::findInterval(double sigma) const {
    auto it = std::upper_bound(breaks_.begin(), breaks_.end(), sigma);
    int j = static_cast<int>(it - breaks_.begin()) - 1;
    return std::clamp(j, 0, ntst_ - 1);
}

MeshFunction::MeshFunction(std::shared_ptr<const Mesh> mesh, double period, int n)
    : mesh_(std::move(mesh)), period_(period), values_(CMat::Zero(n, mesh_->nPoints())) {}

MeshFunction::MeshFunction(std::shared_ptr<const Mesh> mesh, double period, CMat values)
    : mesh_(std::move(mesh)), period_(period), values_(std::move(values)) {
    if (values_.cols() != mesh_->nPoints())
        throw LcnfError("MeshFunction: wrong number of value columns");
}

CVec MeshFunction::atGauss(int j, int g) const {
    const int base = j * mesh_->ncol();
    CVec out = CVec::Zero(n());
    const Mat& L = mesh_->basisAtGauss();
    for (int i = 0; i <= mesh_->ncol(); ++i) out += L(g, i) * values_.col(base + i);
    return out;
}

CVec MeshFunction::derivAtGauss(int j, int g) const {
    const int base = j * mesh_->ncol();
    CVec out = CVec::Zero(n());
    const Mat& Ld = mesh_->basisDerivAtGauss();
    const double scale = 1.0 / (mesh_->intervalLen(j) * period_);
    for (int i = 0; i <= mesh_->ncol(); ++i)
        out += (Ld(g, i) * scale) * values_.col(base + i);
    return out;
}

CVec MeshFunction::interpolate(double tau) const {
    const double sigma = tau / period_;
    if (sigma < -1e-10 || sigma > 1.0 + 1e-10)
        throw LcnfError("interpolate: time outside [0, T]");
    const int j = mesh_->findInterval(std::clamp(sigma, 0.0, 1.0));
    const double s = (std::clamp(sigma, 0.0, 1.0) - mesh_->breaks()[j]) / mesh_->intervalLen(j);
    const Vec w = mesh_->lagrange(s);
    const int base = j * mesh_->ncol();
    CVec out = CVec::Zero(n());
    for (int i = 0; i <= mesh_->ncol(); ++i) out += w[i] * values_.col(base + i);
    return out;
}

CVec MeshFunction::interpDerivative(double tau) const {
    const double sigma = std::clamp(tau / period_, 0.0, 1.0);
    const int j = mesh_->findInterval(sigma);
    const double s = (sigma - mesh_->breaks()[j]) / mesh_->intervalLen(j);
    const Vec w = mesh_->lagrangeDeriv(s);
    const double scale = 1.0 / (mesh_->intervalLen(j) * period_);
    const int base = j * mesh_->ncol();
    CVec out = CVec::Zero(n());
    for (int i = 0; i <= mesh_->ncol(); ++i) out += (w[i] * scale) * values_.col(base + i);
    return out;
}

MeshFunction MeshFunction::conjugate() const {
    return MeshFunction(mesh_, period_, values_.conjugate());
}

MeshFunction MeshFunction::scaled(Cplx s) const {
    return MeshFunction(mesh_, period_, values_ * s);
}

MeshFunction MeshFunction::realPart() const {
    return MeshFunction(mesh_, period_, values_.real().cast<Cplx>());
}

MeshFunction MeshFunction::remesh(std::shared_ptr<const Mesh> to) const {
    MeshFunction out(to, period_, n());
    for (int idx = 0; idx < to->nPoints(); ++idx)
        out.values().col(idx) = interpolate(to->repSigma(idx) * period_);
    return out;
}

MeshFunction& MeshFunction::operator+=(const MeshFunction& o) {
    values_ += o.values_;
    return *this;
}

MeshFunction& MeshFunction::operator-=(const MeshFunction& o) {
    values_ -= o.values_;
    return *this;
}

Cplx inner_product(const MeshFunction& a, const MeshFunction& b) {
    if (a.mesh() != b.mesh() || a.n() != b.n())
        throw LcnfError("inner_product: mesh or dimension mismatch");
    const Mesh& m = *a.mesh();
    Cplx s = 0.0;
    for (int j = 0; j < m.ntst(); ++j)
        for (int g = 0; g < m.ncol(); ++g)
            s += m.gaussWeight(j, g) * a.atGauss(j, g).dot(b.atGauss(j, g));
    return s * a.period();
}

double norm_l2(const MeshFunction& f) {
    return std::sqrt(std::abs(inner_product(f, f)));
}

}  // namespace lcnf

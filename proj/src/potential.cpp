#include "kfp/potential.hpp"

#include <cmath>
#include <numbers>

namespace kfp {

namespace {

constexpr double kTwoPi = 2.0 * std::numbers::pi;

// In-place radix-2 FFT (forward: sign = -1).
void fft(std::vector<cplx>& a, int sign) {
    const size_t n = a.size();
    for (size_t i = 1, j = 0; i < n; ++i) {
        size_t bit = n >> 1;
        for (; j & bit; bit >>= 1) j ^= bit;
        j ^= bit;
        if (i < j) std::swap(a[i], a[j]);
    }
    for (size_t len = 2; len <= n; len <<= 1) {
        double ang = sign * kTwoPi / static_cast<double>(len);
        cplx wl = std::polar(1.0, ang);
        for (size_t i = 0; i < n; i += len) {
            cplx w(1.0);
            for (size_t j = 0; j < len / 2; ++j) {
                cplx u = a[i + j], v = a[i + j + len / 2] * w;
                a[i + j] = u + v;
                a[i + j + len / 2] = u - v;
                w *= wl;
            }
        }
    }
}

}  // namespace

double FourierSeries::eval(const std::array<double, kMaxDim>& x) const {
    cplx s = 0;
    for (auto& [k, v] : c) {
        double phase = 0;
        for (int i = 0; i < dim; ++i) phase += k[i] * x[i];
        s += v * std::polar(1.0, kTwoPi * phase);
    }
    return s.real();
}

FourierSeries FourierSeries::derivative(int axis) const {
    FourierSeries out(dim);
    for (auto& [k, v] : c)
        if (k[axis] != 0) out.add(k, v * cplx(0.0, kTwoPi * k[axis]));
    return out;
}

double FourierSeries::hermitian_defect() const {
    double worst = 0;
    for (auto& [k, v] : c) {
        MIdx mk;
        for (int i = 0; i < kMaxDim; ++i) mk.v[i] = -k.v[i];
        worst = std::max(worst, std::abs(v - std::conj(coef(mk))));
    }
    return worst;
}

FourierSeries FourierSeries::operator+(const FourierSeries& o) const {
    FourierSeries r = *this;
    for (auto& [k, v] : o.c) r.add(k, v);
    return r;
}

FourierSeries FourierSeries::operator-(const FourierSeries& o) const {
    FourierSeries r = *this;
    for (auto& [k, v] : o.c) r.add(k, -v);
    return r;
}

FourierSeries FourierSeries::operator*(double s) const {
    FourierSeries r(dim);
    for (auto& [k, v] : c) r.add(k, v * s);
    return r;
}

FourierSeries FourierSeries::product(const FourierSeries& o) const {
    FourierSeries r(dim);
    for (auto& [ka, va] : c)
        for (auto& [kb, vb] : o.c) {
            MIdx k;
            for (int i = 0; i < kMaxDim; ++i) k.v[i] = ka.v[i] + kb.v[i];
            r.add(k, va * vb);
        }
    return r;
}

Potential::Potential(int dim) : dim_(dim), h_(dim) {
    for (auto& s : dh_) s = FourierSeries(dim);
    weight_ = FourierSeries(dim);
}

Potential Potential::cosine(int dim, double lambda, const MIdx& wave) {
    Potential p(dim);
    p.set_mode(wave, cplx(lambda / 2.0, 0.0));
    return p;
}

void Potential::set_mode(const MIdx& k, cplx coeff) {
    MIdx mk;
    for (int i = 0; i < kMaxDim; ++i) mk.v[i] = -k.v[i];
    h_.c[k] = coeff;
    h_.c[mk] = std::conj(coeff);
    if (h_.c[k] == cplx(0)) {
        h_.c.erase(k);
        h_.c.erase(mk);
    }
    refresh_derivatives();
    weight_ready_ = false;
}

void Potential::refresh_derivatives() {
    for (int i = 0; i < dim_; ++i) dh_[i] = h_.derivative(i);
}

double Potential::sup_grad_norm() const {
    if (is_zero()) return 0.0;
    const int per_axis = 64 * (max_mode() + 1);
    double worst = 0;
    std::array<double, kMaxDim> x{};
    const int total = static_cast<int>(std::pow(per_axis, dim_));
    for (int s = 0; s < total; ++s) {
        int t = s;
        for (int i = 0; i < dim_; ++i) {
            x[i] = static_cast<double>(t % per_axis) / per_axis;
            t /= per_axis;
        }
        double g2 = 0;
        for (int i = 0; i < dim_; ++i) {
            double gi = grad_eval(i, x);
            g2 += gi * gi;
        }
        worst = std::max(worst, std::sqrt(g2));
    }
    return worst;
}

const FourierSeries& Potential::weight() const {
    if (weight_ready_) return weight_;
    weight_ = FourierSeries(dim_);
    int m = 64;
    while (m < 16 * (max_mode() + 1)) m *= 2;
    // sample exp(-H) on an m^d grid and take the separable DFT
    std::vector<cplx> grid;
    long total = 1;
    for (int i = 0; i < dim_; ++i) total *= m;
    grid.resize(total);
    std::array<double, kMaxDim> x{};
    for (long s = 0; s < total; ++s) {
        long t = s;
        for (int i = dim_ - 1; i >= 0; --i) {
            x[i] = static_cast<double>(t % m) / m;
            t /= m;
        }
        grid[s] = std::exp(-h_.eval(x));
    }
    // FFT along each axis
    long stride_block = total / m;  // elements per outer slice for axis-major walk
    for (int axis = dim_ - 1; axis >= 0; --axis) {
        long inner = 1;
        for (int i = axis + 1; i < dim_; ++i) inner *= m;
        long outer = total / (inner * m);
        std::vector<cplx> line(m);
        for (long o = 0; o < outer; ++o)
            for (long in = 0; in < inner; ++in) {
                for (int j = 0; j < m; ++j) line[j] = grid[(o * m + j) * inner + in];
                fft(line, -1);
                for (int j = 0; j < m; ++j) grid[(o * m + j) * inner + in] = line[j] / static_cast<double>(m);
            }
    }
    (void)stride_block;
    // keep coefficients above threshold, mapping DFT bins to signed modes
    const double thresh = 1e-17 * std::abs(grid[0]);
    const int kmax = m / 2 - 1;
    std::vector<MIdx> stack;
    std::array<int, kMaxDim> idx{};
    std::function<void(int)> walk = [&](int axis) {
        if (axis == dim_) {
            long flat = 0;
            MIdx k;
            for (int i = 0; i < dim_; ++i) {
                int ki = idx[i];
                k.v[i] = ki;
                flat = flat * m + (ki >= 0 ? ki : ki + m);
            }
            cplx v = grid[flat];
            if (std::abs(v) > thresh) weight_.c[k] = v;
            return;
        }
        for (int ki = -kmax; ki <= kmax; ++ki) {
            idx[axis] = ki;
            walk(axis + 1);
        }
    };
    walk(0);
    weight_ready_ = true;
    return weight_;
}

double Potential::weight_eval(const std::array<double, kMaxDim>& x) const { return std::exp(-h_.eval(x)); }

double Potential::weight_cell_mass_1d(double lo, double hi) const {
    if (dim_ != 1) throw std::invalid_argument("weight_cell_mass_1d: 1-d only");
    const FourierSeries& w = weight();
    // int_lo^hi e^{-H} = sum_k c_k (e^{2 pi i k hi} - e^{2 pi i k lo}) / (2 pi i k)
    cplx s = 0;
    for (auto& [k, v] : w.c) {
        if (k[0] == 0) {
            s += v * (hi - lo);
        } else {
            cplx den(0.0, kTwoPi * k[0]);
            s += v * (std::polar(1.0, kTwoPi * k[0] * hi) - std::polar(1.0, kTwoPi * k[0] * lo)) / den;
        }
    }
    return s.real();
}

uint64_t Potential::hash() const {
    Fnv1a h;
    h.update_pod(dim_);
    for (auto& [k, v] : h_.c) {
        h.update_pod(k.v);
        double re = v.real(), im = v.imag();
        h.update_pod(re);
        h.update_pod(im);
    }
    return h.digest();
}

FrictionMatrix::FrictionMatrix(int dim) : dim_(dim) {
    for (auto& row : e_)
        for (auto& s : row) s = FourierSeries(dim);
}

FrictionMatrix FrictionMatrix::identity(int dim) {
    return constant(Eigen::MatrixXd::Identity(dim, dim));
}

FrictionMatrix FrictionMatrix::constant(const Eigen::MatrixXd& a) {
    FrictionMatrix f(static_cast<int>(a.rows()));
    for (int i = 0; i < f.dim_; ++i)
        for (int j = 0; j < f.dim_; ++j)
            if (a(i, j) != 0.0) f.e_[i][j].c[MIdx{}] = a(i, j);
    return f;
}

void FrictionMatrix::set_mode(int i, int j, const MIdx& k, cplx v) {
    MIdx mk;
    for (int t = 0; t < kMaxDim; ++t) mk.v[t] = -k.v[t];
    e_[i][j].c[k] = v;
    e_[i][j].c[mk] = std::conj(v);
    if (i != j) {
        e_[j][i].c[k] = v;
        e_[j][i].c[mk] = std::conj(v);
    }
}

bool FrictionMatrix::is_constant() const {
    for (int i = 0; i < dim_; ++i)
        for (int j = 0; j < dim_; ++j)
            for (auto& [k, v] : e_[i][j].c)
                if (k.max_abs() != 0 && v != cplx(0)) return false;
    return true;
}

Eigen::MatrixXd FrictionMatrix::mean() const {
    Eigen::MatrixXd m(dim_, dim_);
    for (int i = 0; i < dim_; ++i)
        for (int j = 0; j < dim_; ++j) m(i, j) = e_[i][j].mean().real();
    return m;
}

Eigen::MatrixXd FrictionMatrix::eval(const std::array<double, kMaxDim>& x) const {
    Eigen::MatrixXd m(dim_, dim_);
    for (int i = 0; i < dim_; ++i)
        for (int j = 0; j < dim_; ++j) m(i, j) = e_[i][j].eval(x);
    return m;
}

int FrictionMatrix::max_mode() const {
    int m = 0;
    for (int i = 0; i < dim_; ++i)
        for (int j = 0; j < dim_; ++j) m = std::max(m, e_[i][j].max_mode());
    return m;
}

double FrictionMatrix::min_eigenvalue_sampled(int per_axis) const {
    double worst = std::numeric_limits<double>::max();
    std::array<double, kMaxDim> x{};
    const int total = is_constant() ? 1 : static_cast<int>(std::pow(per_axis, dim_));
    for (int s = 0; s < total; ++s) {
        int t = s;
        for (int i = 0; i < dim_; ++i) {
            x[i] = static_cast<double>(t % per_axis) / per_axis;
            t /= per_axis;
        }
        Eigen::MatrixXd m = eval(x);
        Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(0.5 * (m + m.transpose()));
        worst = std::min(worst, es.eigenvalues().minCoeff());
    }
    return worst;
}

void FrictionMatrix::validate(double lambda_min) const {
    for (int i = 0; i < dim_; ++i)
        for (int j = 0; j < dim_; ++j) {
            if (e_[i][j].hermitian_defect() > 1e-12)
                throw std::invalid_argument("FrictionMatrix: entries must be real (Hermitian modes)");
            for (auto& [k, v] : e_[i][j].c)
                if (std::abs(v - e_[j][i].coef(k)) > 1e-12)
                    throw std::invalid_argument("FrictionMatrix: matrix must be symmetric");
        }
    if (min_eigenvalue_sampled() < lambda_min)
        throw std::invalid_argument("FrictionMatrix: matrix must be uniformly positive definite");
}

uint64_t FrictionMatrix::hash() const {
    Fnv1a h;
    h.update_pod(dim_);
    for (int i = 0; i < dim_; ++i)
        for (int j = 0; j < dim_; ++j)
            for (auto& [k, v] : e_[i][j].c) {
                h.update_pod(i);
                h.update_pod(j);
                h.update_pod(k.v);
                double re = v.real(), im = v.imag();
                h.update_pod(re);
                h.update_pod(im);
            }
    return h.digest();
}

}  // namespace kfp

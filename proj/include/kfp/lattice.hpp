#pragma once

#include <stdexcept>
#include <vector>

#include "kfp/common.hpp"

namespace kfp {

struct DomainTooSmall : std::invalid_argument {
    using std::invalid_argument::invalid_argument;
};

// Values on the centered lattice cube Z^d cap Q_r: per axis z in
// [-half, half]. Holds cell averages and their iterated differences.
class LatticeField {
  public:
    LatticeField(int dim, int half) : dim_(dim), half_(half) {
        if (dim < 1 || dim > kMaxDim || half < 0) throw std::invalid_argument("LatticeField: bad extents");
        int side = 2 * half + 1;
        size_t n = 1;
        for (int i = 0; i < dim; ++i) n *= side;
        data_.assign(n, 0.0);
    }

    int dim() const { return dim_; }
    int half() const { return half_; }
    int side() const { return 2 * half_ + 1; }
    size_t size() const { return data_.size(); }

    bool contains(const MIdx& z) const { return z.max_abs() <= half_; }

    double& at(const MIdx& z) { return data_[flat(z)]; }
    double at(const MIdx& z) const { return data_[flat(z)]; }

    std::vector<MIdx> points() const {
        std::vector<MIdx> pts;
        pts.reserve(size());
        MIdx z;
        fill_points(0, z, pts);
        return pts;
    }

    // D^i f(z) = f(z + e_i) - f(z); domain contracts by one layer on the
    // positive side of the axis -- we keep the centered cube and shrink both
    // sides symmetrically per full multi-index application below.
    LatticeField difference(int axis) const {
        if (half_ < 1) throw DomainTooSmall("LatticeField: cannot difference a single cell");
        LatticeField out(dim_, half_ - 1);
        for (auto& z : out.points()) out.at(z) = at(z.plus(axis, 1)) - at(z);
        return out;
    }

    LatticeField difference(const MIdx& alpha) const {
        LatticeField out = *this;
        for (int i = 0; i < dim_; ++i)
            for (int k = 0; k < alpha[i]; ++k) out = out.difference(i);
        return out;
    }

    double sup_norm() const {
        double m = 0;
        for (double v : data_) m = std::max(m, std::abs(v));
        return m;
    }

  private:
    int dim_, half_;
    std::vector<double> data_;

    size_t flat(const MIdx& z) const {
        size_t idx = 0;
        for (int i = 0; i < dim_; ++i) {
            int c = z[i] + half_;
            if (c < 0 || c >= side()) throw std::out_of_range("LatticeField: index outside cube");
            idx = idx * side() + static_cast<size_t>(c);
        }
        return idx;
    }

    void fill_points(int axis, MIdx& z, std::vector<MIdx>& pts) const {
        if (axis == dim_) {
            pts.push_back(z);
            return;
        }
        for (int c = -half_; c <= half_; ++c) {
            z.v[axis] = c;
            fill_points(axis + 1, z, pts);
        }
        z.v[axis] = 0;
    }
};

inline LatticeField finite_difference(const LatticeField& g, const MIdx& alpha) { return g.difference(alpha); }

}  // namespace kfp

#pragma once

#include <algorithm>
#include <array>
#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

namespace varsparse {

// Hard cap on the ambient dimension. The toolkit targets d in [2, 6];
// fixed-size coordinate storage keeps the hot interpolation and quadrature
// loops free of heap traffic.
inline constexpr int kMaxDim = 6;

using Vec = std::array<double, kMaxDim>;
using IVec = std::array<std::int64_t, kMaxDim>;
using Shift = std::array<std::uint8_t, kMaxDim>;

inline Vec zero_vec() { return Vec{}; }

/// Axis-parallel box, half-open in every coordinate: [lo_i, hi_i).
struct Box {
    int dim = 0;
    Vec lo{};
    Vec hi{};

    bool contains(const Vec& x) const {
        for (int i = 0; i < dim; ++i)
            if (!(x[i] >= lo[i] && x[i] < hi[i])) return false;
        return true;
    }
    Vec center() const {
        Vec c{};
        for (int i = 0; i < dim; ++i) c[i] = 0.5 * (lo[i] + hi[i]);
        return c;
    }
    Vec sides() const {
        Vec s{};
        for (int i = 0; i < dim; ++i) s[i] = hi[i] - lo[i];
        return s;
    }
    double volume() const {
        double v = 1.0;
        for (int i = 0; i < dim; ++i) v *= hi[i] - lo[i];
        return v;
    }
    bool intersects(const Box& o) const {
        for (int i = 0; i < dim; ++i)
            if (hi[i] <= o.lo[i] || o.hi[i] <= lo[i]) return false;
        return true;
    }
    static Box from_center_sides(int dim, const Vec& center, const Vec& sides) {
        Box b;
        b.dim = dim;
        for (int i = 0; i < dim; ++i) {
            b.lo[i] = center[i] - 0.5 * sides[i];
            b.hi[i] = center[i] + 0.5 * sides[i];
        }
        return b;
    }
};

/// lambda*Q: same center, each side multiplied by lambda. The result is a
/// plain box; dilating a gamma-cube does not generally yield a gamma-cube.
inline Box dilate_cube(const Box& q, double lambda) {
    if (!(lambda > 0.0)) throw std::invalid_argument("dilate_cube: scale must be positive");
    return Box::from_center_sides(q.dim, q.center(), [&] {
        Vec s = q.sides();
        for (int i = 0; i < q.dim; ++i) s[i] *= lambda;
        return s;
    }());
}

/// Sample mask: membership means inside `include` (if set) and outside
/// `exclude` (if set). Realizes the truncations f*chi_{A\B} at sample level.
struct MaskRegion {
    std::optional<Box> include;
    std::optional<Box> exclude;

    bool admits(const Vec& c) const {
        if (include && !include->contains(c)) return false;
        if (exclude && exclude->contains(c)) return false;
        return true;
    }
};

/// Odometer loop over a d-dimensional index range [0, dims_i).
template <class F>
void for_each_index(int dim, const IVec& dims, F&& fn) {
    IVec idx{};
    for (int i = 0; i < dim; ++i)
        if (dims[i] <= 0) return;
    while (true) {
        fn(static_cast<const IVec&>(idx));
        int axis = dim - 1;
        while (axis >= 0) {
            if (++idx[axis] < dims[axis]) break;
            idx[axis] = 0;
            --axis;
        }
        if (axis < 0) break;
    }
}

/// d-dimensional summed-area table over a cell grid; half-open range counts.
class PrefixSum {
public:
    PrefixSum() = default;
    PrefixSum(int dim, const IVec& dims, const std::vector<std::uint8_t>& cells)
        : dim_(dim), dims_(dims) {
        std::int64_t total = 1;
        for (int i = 0; i < dim; ++i) {
            ext_[i] = dims[i] + 1;
            total *= ext_[i];
        }
        data_.assign(static_cast<std::size_t>(total), 0);
        // seed with shifted cell values, then sweep prefix sums axis by axis
        for_each_index(dim, dims_, [&](const IVec& idx) {
            IVec shifted = idx;
            for (int i = 0; i < dim; ++i) ++shifted[i];
            data_[offset(shifted)] = cells[cell_offset(idx)];
        });
        for (int axis = 0; axis < dim; ++axis) {
            for_each_index(dim, ext_as_dims(), [&](const IVec& idx) {
                if (idx[axis] == 0) return;
                IVec prev = idx;
                --prev[axis];
                data_[offset(idx)] += data_[offset(prev)];
            });
        }
    }

    /// Number of set cells with index in [lo_i, hi_i).
    std::int64_t count(const IVec& lo, const IVec& hi) const {
        IVec clo = lo, chi = hi;
        for (int i = 0; i < dim_; ++i) {
            clo[i] = std::max<std::int64_t>(0, std::min(clo[i], dims_[i]));
            chi[i] = std::max<std::int64_t>(0, std::min(chi[i], dims_[i]));
            if (chi[i] <= clo[i]) return 0;
        }
        std::int64_t total = 0;
        for (int corner = 0; corner < (1 << dim_); ++corner) {
            IVec at;
            int sign = 1;
            for (int i = 0; i < dim_; ++i) {
                if (corner & (1 << i)) {
                    at[i] = chi[i];
                } else {
                    at[i] = clo[i];
                    sign = -sign;
                }
            }
            total += sign * data_[offset(at)];
        }
        return total;
    }

private:
    IVec ext_as_dims() const {
        IVec d{};
        for (int i = 0; i < dim_; ++i) d[i] = ext_[i];
        return d;
    }
    std::size_t offset(const IVec& idx) const {
        std::size_t off = 0;
        for (int i = 0; i < dim_; ++i) off = off * static_cast<std::size_t>(ext_[i]) + static_cast<std::size_t>(idx[i]);
        return off;
    }
    std::size_t cell_offset(const IVec& idx) const {
        std::size_t off = 0;
        for (int i = 0; i < dim_; ++i) off = off * static_cast<std::size_t>(dims_[i]) + static_cast<std::size_t>(idx[i]);
        return off;
    }

    int dim_ = 0;
    IVec dims_{};
    IVec ext_{};
    std::vector<std::int64_t> data_;
};

/// Raised when an iterative construction (e.g. the exceptional-set threshold
/// ladder) cannot meet its measure target; carries the attempted trace.
class ConstructionError : public std::runtime_error {
public:
    explicit ConstructionError(const std::string& what) : std::runtime_error(what) {}
};

}  // namespace varsparse

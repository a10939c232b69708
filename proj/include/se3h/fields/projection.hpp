#pragma once

#include <Eigen/Dense>

#include "se3h/core/spherical_harmonics.hpp"
#include "se3h/fields/direction_set.hpp"
#include "se3h/fields/spherical_field.hpp"

namespace se3h {

struct UnderdeterminedError : std::invalid_argument {
    using std::invalid_argument::invalid_argument;
};

// Synthesis matrix rows = directions, columns = channels, entries (2j+1)/(8 pi^2) Y^j_n(d).
inline Eigen::MatrixXcd synthesis_matrix(const std::vector<Vec3>& dirs, int L, Parity parity) {
    const std::size_t nch = sh_channel_count(L, parity);
    Eigen::MatrixXcd A(static_cast<Eigen::Index>(dirs.size()), static_cast<Eigen::Index>(nch));
    std::vector<cplx> y(static_cast<size_t>((L + 1) * (L + 1)));
    for (std::size_t d = 0; d < dirs.size(); ++d) {
        check_unit(dirs[d]);
        sh_all_unchecked(L, dirs[d], y.data());
        for (int j = 0; j <= L; ++j) {
            if (!order_present(parity, j)) continue;
            for (int n = -j; n <= j; ++n)
                A(Eigen::Index(d), Eigen::Index(sh_channel_index(j, n, parity))) =
                    (2.0 * j + 1.0) / kHaarMass * y[static_cast<size_t>(j * j + j + n)];
        }
    }
    return A;
}

// Least-squares projection onto band-limited SH and its synthesis, for one direction set.
class SHProjector {
public:
    SHProjector(const std::vector<Vec3>& dirs, int L, Parity parity) : L_(L), parity_(parity), ndirs_(dirs.size()) {
        const std::size_t nch = sh_channel_count(L, parity);
        if (dirs.size() < nch)
            throw UnderdeterminedError("project_to_sh: " + std::to_string(dirs.size()) + " directions for " +
                                       std::to_string(nch) + " basis functions");
        synth_ = synthesis_matrix(dirs, L, parity);
        pinv_ = synth_.completeOrthogonalDecomposition().pseudoInverse();
    }

    int L() const { return L_; }
    Parity parity() const { return parity_; }
    const Eigen::MatrixXcd& synthesis() const { return synth_; }
    const Eigen::MatrixXcd& pseudo_inverse() const { return pinv_; }

    template <class T>
    SphericalField project(const SampledField<T>& s) const {
        require(s.ndirs == ndirs_, "project_to_sh: sample count does not match direction set");
        SphericalField f(s.grid, L_, parity_, std::is_same_v<T, double>);
        const std::size_t nv = s.voxels();
        for (Eigen::Index c = 0; c < pinv_.rows(); ++c) {
            auto out = f.channel_at(static_cast<std::size_t>(c));
            for (std::size_t d = 0; d < ndirs_; ++d) {
                const cplx w = pinv_(c, Eigen::Index(d));
                const T* in = s.values.data() + d * nv;
                for (std::size_t v = 0; v < nv; ++v) out[v] += w * in[v];
            }
        }
        return f;
    }

    SampledField<cplx> evaluate(const SphericalField& f) const {
        require(f.L() == L_ && f.parity() == parity_, "evaluate: projector band limit mismatch");
        SampledField<cplx> s(f.grid(), ndirs_);
        const std::size_t nv = f.voxels();
        for (std::size_t d = 0; d < ndirs_; ++d) {
            cplx* out = s.values.data() + d * nv;
            for (Eigen::Index c = 0; c < synth_.cols(); ++c) {
                const cplx w = synth_(Eigen::Index(d), c);
                auto in = f.channel_at(static_cast<std::size_t>(c));
                for (std::size_t v = 0; v < nv; ++v) out[v] += w * in[v];
            }
        }
        return s;
    }

    SampledField<double> evaluate_real(const SphericalField& f) const {
        SampledField<cplx> c = evaluate(f);
        SampledField<double> r(c.grid, c.ndirs);
        for (std::size_t i = 0; i < c.values.size(); ++i) r.values[i] = c.values[i].real();
        return r;
    }

private:
    int L_;
    Parity parity_;
    std::size_t ndirs_;
    Eigen::MatrixXcd synth_;
    Eigen::MatrixXcd pinv_;
};

template <class T>
SphericalField project_to_sh(const SampledField<T>& samples, const DirectionSet& dirs, int L, Parity parity) {
    return SHProjector(dirs.directions, L, parity).project(samples);
}

inline SampledField<cplx> evaluate_on_directions(const SphericalField& f, const DirectionSet& dirs) {
    SampledField<cplx> s(f.grid(), dirs.size());
    const std::size_t nv = f.voxels();
    Eigen::MatrixXcd A = synthesis_matrix(dirs.directions, f.L(), f.parity());
    for (std::size_t d = 0; d < dirs.size(); ++d) {
        cplx* out = s.values.data() + d * nv;
        for (Eigen::Index c = 0; c < A.cols(); ++c) {
            const cplx w = A(Eigen::Index(d), c);
            auto in = f.channel_at(static_cast<std::size_t>(c));
            for (std::size_t v = 0; v < nv; ++v) out[v] += w * in[v];
        }
    }
    return s;
}

// Angular function of one voxel at a single direction.
inline cplx evaluate_voxel(const SphericalField& f, std::size_t voxel, const Vec3& dir) {
    std::vector<cplx> y = sh_all(f.L(), dir);
    cplx s = 0;
    f.for_each_channel([&](int j, int n) {
        s += (2.0 * j + 1.0) / kHaarMass * y[static_cast<size_t>(j * j + j + n)] * f.at(j, n, voxel);
    });
    return s;
}

}  // namespace se3h

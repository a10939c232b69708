#pragma once

#include <cmath>
#include <map>
#include <memory>
#include <mutex>
#include <string>
#include <vector>

#include "se3h/fields/field_ops.hpp"
#include "se3h/operators/convolved.hpp"
#include "se3h/operators/wigner_ops.hpp"

namespace se3h {

struct UnknownOperator : std::invalid_argument {
    using std::invalid_argument::invalid_argument;
};

struct GeneratorTerm {
    std::string op;
    double weight = 0.0;
};

// Operator names: T0, T0_sq, Txy_sq, Laplace, Jsq, CT0sqC, T0CCT0, CTxysqC, TxyCCTxy.
// The C-wrapped names read the coefficient vector c.
struct GeneratorSpec {
    std::vector<GeneratorTerm> terms;
    std::vector<double> c;
};

inline const std::vector<std::string>& generator_operator_names() {
    static const std::vector<std::string> names{"T0",     "T0_sq",  "Txy_sq",  "Laplace", "Jsq",
                                                "CT0sqC", "T0CCT0", "CTxysqC", "TxyCCTxy"};
    return names;
}

// Linear combination of named operators. All second-order axial terms are fused into one
// sweep; T0 and the diagonal terms are applied separately and summed.
class Generator {
public:
    explicit Generator(GeneratorSpec spec) : spec_(std::move(spec)) {
        for (const auto& t : spec_.terms) {
            const auto& names = generator_operator_names();
            if (std::find(names.begin(), names.end(), t.op) == names.end())
                throw UnknownOperator("generator: unknown operator '" + t.op + "'");
            if (!std::isfinite(t.weight)) throw ContractError("generator: weight for '" + t.op + "' is not finite");
        }
    }

    const GeneratorSpec& spec() const { return spec_; }
    bool empty() const { return spec_.terms.empty(); }

    // True when the output may hold odd orders for even input.
    bool mixes_parity() const {
        for (const auto& t : spec_.terms)
            if (t.op == "T0" && t.weight != 0.0) return true;
        return false;
    }

    SphericalField apply(const SphericalField& f) const {
        const Parity p = mixes_parity() ? Parity::all : f.parity();
        SphericalField out(f.grid(), f.L(), p, f.real_valued());
        double t0 = 0.0;
        std::vector<double> diag(std::size_t(f.L()) + 1, 0.0);
        bool any_diag = false;
        for (const auto& t : spec_.terms) {
            if (t.op == "T0") t0 += t.weight;
            if (t.op == "Jsq") {
                for (int j = 0; j <= f.L(); ++j) diag[j] += -t.weight * j * (j + 1);
                any_diag = true;
            }
        }
        if (t0 != 0.0) axpy(out, 1.0, apply_T0_s2(f, t0));
        if (const AxialQuadratic* q = axial(f.L())) axpy(out, 1.0, apply_axial_quadratic(f, *q));
        if (any_diag) axpy(out, 1.0, apply_diagonal(f, diag));
        return out;
    }

    // Operators on full Wigner fields; the C-wrapped variants are S2-only.
    WignerField apply(const WignerField& f) const {
        WignerField out(f.grid(), f.L());
        auto acc = [&](const WignerField& x, double w) {
            for (std::size_t i = 0; i < out.data().size(); ++i) out.data()[i] += w * x.data()[i];
        };
        for (const auto& t : spec_.terms) {
            if (t.weight == 0.0) continue;
            if (t.op == "T0") acc(apply_Tk(f, 0), t.weight);
            else if (t.op == "T0_sq") acc(apply_TT(f, 0, 0), t.weight);
            else if (t.op == "Txy_sq") {
                acc(apply_TT(f, 1, 1), t.weight);
                acc(apply_TT(f, -1, -1), t.weight);
            } else if (t.op == "Laplace") {
                for (int k = -1; k <= 1; ++k) acc(apply_TT(f, k, k), t.weight);
            } else if (t.op == "Jsq") acc(apply_J_squared(f), t.weight);
            else throw ContractError("generator: '" + t.op + "' is not defined for Wigner fields");
        }
        return out;
    }

private:
    // Fused second-order part for band limit L, or nullptr when there is none. Cached per L.
    const AxialQuadratic* axial(int L) const {
        std::lock_guard lock(mu_);
        auto it = cache_.find(L);
        if (it != cache_.end()) return it->second.get();
        std::vector<std::pair<AxialQuadratic, double>> parts;
        for (const auto& t : spec_.terms) {
            if (t.weight == 0.0) continue;
            if (t.op == "T0_sq") parts.emplace_back(tz2_form(L), t.weight);
            else if (t.op == "Txy_sq") parts.emplace_back(txy2_form(L), t.weight);
            else if (t.op == "Laplace") parts.emplace_back(laplace_form(L), t.weight);
            else if (t.op == "CT0sqC") parts.emplace_back(convolved_form(L, spec_.c, ConvolvedVariant::CTz2C), t.weight);
            else if (t.op == "T0CCT0") parts.emplace_back(convolved_form(L, spec_.c, ConvolvedVariant::TzCCTz), t.weight);
            else if (t.op == "CTxysqC") parts.emplace_back(convolved_form(L, spec_.c, ConvolvedVariant::CTxy2C), t.weight);
            else if (t.op == "TxyCCTxy")
                parts.emplace_back(convolved_form(L, spec_.c, ConvolvedVariant::TxyCCTxy), t.weight);
        }
        std::unique_ptr<AxialQuadratic> q;
        if (!parts.empty()) {
            const int n = L + 1;
            std::vector<cplx> lap(n, cplx{}), blk(std::size_t(n) * n, cplx{});
            for (const auto& [form, w] : parts)
                for (int j = 0; j <= L; ++j) {
                    lap[j] += w * form.lap[j];
                    if (!form.block) continue;
                    for (int jp = std::max(0, j - 2); jp <= std::min(L, j + 2); ++jp)
                        blk[std::size_t(j) * n + jp] += w * form.block(j, jp);
                }
            q = std::make_unique<AxialQuadratic>();
            q->lap = std::move(lap);
            q->block = [blk, n](int j, int jp) { return blk[std::size_t(j) * n + jp]; };
        }
        return cache_.emplace(L, std::move(q)).first->second.get();
    }

    GeneratorSpec spec_;
    mutable std::mutex mu_;
    mutable std::map<int, std::unique_ptr<AxialQuadratic>> cache_;
};

inline Generator build_generator(const GeneratorSpec& spec) { return Generator(spec); }

}  // namespace se3h

#include "mmwb/freeenergy.hpp"

#include "mmwb/mapcount.hpp"

namespace mmwb {

namespace {

template <Field F>
Series<F> integrate_coupling_line(const std::vector<Series<F>>& per_term, const ShapePtr& shape) {
    Series<F> out(shape);
    const auto& sh = *shape;
    for (std::size_t j = 0; j < per_term.size(); ++j) {
        const Series<F>& s = per_term[j];
        if (!s.has_shape()) continue;
        for (std::size_t p = 0; p < sh.size(); ++p) {
            if (is_zero(s[p])) continue;
            std::size_t q = sh.shift(p, static_cast<int>(j));
            if (q >= sh.size()) continue;
            out[q] -= s[p] / F(static_cast<long long>(sh.total(q)));
        }
    }
    return out;
}

}  // namespace

template <Field F>
Series<F> f0(const SeriesMoments<F>& mu) {
    std::vector<Series<F>> per_term;
    const Potential& V = mu.potential();
    for (int j = 0; j < V.size(); ++j) per_term.push_back(mu.upto(V.term(j).q, mu.order() - 1));
    return integrate_coupling_line(per_term, mu.shape());
}

template <Field F>
Series<F> f1(const OperatorContext<F>& ctx) {
    std::vector<Series<F>> per_term;
    const Potential& V = ctx.potential();
    for (int j = 0; j < V.size(); ++j) {
        if (ctx.order() == 0) {
            per_term.emplace_back();
            continue;
        }
        per_term.push_back(ctx.second_order_correction(ctx.lift(V.term(j).q), ctx.order() - 1));
    }
    return integrate_coupling_line(per_term, ctx.shape());
}

template Series<Rational> f0(const SeriesMoments<Rational>&);
template Series<double> f0(const SeriesMoments<double>&);
template Series<Rational> f1(const OperatorContext<Rational>&);
template Series<double> f1(const OperatorContext<double>&);

Series<Rational> f0(const Potential& V, int K) {
    SeriesMoments<Rational> mu(V, K);
    return f0(mu);
}

Series<Rational> f1(const Potential& V, int K) {
    SeriesMoments<Rational> mu(V, K);
    OperatorContext<Rational> ctx(mu);
    return f1(ctx);
}

bool FreeEnergyReport::pass() const {
    for (const auto& c : cross_check)
        if (!c.pass) return false;
    return true;
}

FreeEnergyReport free_energy(const Potential& V, int K, bool cross_check) {
    FreeEnergyReport r;
    r.K = K;
    SeriesMoments<Rational> mu(V, K);
    OperatorContext<Rational> ctx(mu);
    r.F0 = f0(mu);
    r.F1 = f1(ctx);
    if (!cross_check) return r;
    auto maps = map_generating_functions(V, K, {});
    auto shape = mu.shape();
    Series<Rational> zero(shape);
    const Series<Rational>& g0 = maps.count(0) ? maps.at(0) : zero;
    const Series<Rational>& g1 = maps.count(1) ? maps.at(1) : zero;
    for (std::size_t p = 1; p < shape->size(); ++p) {
        r.cross_check.push_back({shape->index(p), "F0", r.F0[p], g0[p], r.F0[p] == g0[p]});
        r.cross_check.push_back({shape->index(p), "F1", r.F1[p], g1[p], r.F1[p] == g1[p]});
    }
    return r;
}

Complex ThermoReference::F0_at(double alpha) const {
    std::vector<Complex> t;
    for (auto c : couplings) t.push_back(alpha * c);
    return F0.evaluate(t);
}

Complex ThermoReference::F1_at(double alpha) const {
    std::vector<Complex> t;
    for (auto c : couplings) t.push_back(alpha * c);
    return F1.evaluate(t);
}

Complex ThermoReference::log_Z(double N, double alpha) const { return N * N * F0_at(alpha) + F1_at(alpha); }

ThermoReference thermo_reference(const Potential& V, int K) {
    auto r = free_energy(V, K, false);
    return {r.F0, r.F1, V.coupling_values()};
}

}  // namespace mmwb

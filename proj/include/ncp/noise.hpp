#pragma once

#include <cmath>
#include <cstdint>
#include <string>
#include <utility>
#include <vector>

#include "ncp/channels.hpp"
#include "ncp/matrix.hpp"
#include "ncp/states.hpp"
#include "ncp/tomography.hpp"

namespace ncp {

enum class NoiseKind { poisson, gaussian_approx };

struct NoiseModel {
    NoiseKind kind = NoiseKind::poisson;
    std::uint64_t shots = 10000;
};

// Counter-based generator: every (seed, trial, record) triple gets its own
// stream, so trials can run in any order and still reproduce.
class CounterRng {
  public:
    CounterRng(std::uint64_t seed, std::uint64_t trial = 0, std::uint64_t record = 0) {
        state_ = mix(seed + 0x9e3779b97f4a7c15ull);
        state_ = mix(state_ ^ mix(trial + 0xbf58476d1ce4e5b9ull));
        state_ = mix(state_ ^ mix(record + 0x94d049bb133111ebull));
    }

    std::uint64_t next() {
        state_ += 0x9e3779b97f4a7c15ull;
        return mix(state_);
    }

    double uniform() {  // in (0, 1)
        return (double(next() >> 11) + 0.5) * (1.0 / 9007199254740992.0);
    }

    double gaussian() {
        const double u1 = uniform(), u2 = uniform();
        return std::sqrt(-2.0 * std::log(u1)) * std::cos(2.0 * M_PI * u2);
    }

    // inversion below mean 30, rounded Gaussian above
    std::uint64_t poisson(double mean) {
        if (mean <= 0.0) return 0;
        if (mean < 30.0) {
            const double l = std::exp(-mean);
            double p = 1.0;
            std::uint64_t k = 0;
            do {
                ++k;
                p *= uniform();
            } while (p > l);
            return k - 1;
        }
        const double draw = mean + std::sqrt(mean) * gaussian();
        return draw <= 0.0 ? 0 : std::uint64_t(std::llround(draw));
    }

  private:
    static std::uint64_t mix(std::uint64_t z) {
        z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ull;
        z = (z ^ (z >> 27)) * 0x94d049bb133111ebull;
        return z ^ (z >> 31);
    }

    std::uint64_t state_ = 0;
};

inline std::uint64_t sample_one(double expected, const NoiseModel& model, CounterRng& rng) {
    if (expected <= 0.0) return 0;
    if (model.kind == NoiseKind::poisson) return rng.poisson(expected);
    const double draw = expected + std::sqrt(expected) * rng.gaussian();
    return draw <= 0.0 ? 0 : std::uint64_t(std::llround(draw));
}

// n_jm = shots * tr[(rho_j^T (x) M_m) Lambda]
inline std::vector<CountRecord> expected_counts(const ProcessMatrix& L,
                                                const TomographicBasis& inputs,
                                                const TomographicBasis& measurements,
                                                std::uint64_t shots) {
    if (inputs.dim() != L.d || measurements.dim() != L.d)
        throw DimensionError("expected_counts: dimension mismatch");
    std::vector<CountRecord> out;
    for (std::size_t j = 0; j < inputs.elements.size(); ++j)
        for (std::size_t m = 0; m < measurements.elements.size(); ++m) {
            double n = double(shots) *
                       (tensor(inputs.elements[j].transpose(), measurements.elements[m]) * L.mat)
                           .trace()
                           .real();
            if (n < -1e-3 * double(shots))
                throw std::invalid_argument("expected_counts: strongly negative expectation");
            CountRecord r;
            r.input_label = inputs.names[j];
            r.measurement_label = measurements.names[m];
            r.expected = std::max(n, 0.0);
            r.shots = shots;
            out.push_back(r);
        }
    return out;
}

inline std::vector<CountRecord> sample_counts(std::vector<CountRecord> records,
                                              const NoiseModel& model, std::uint64_t seed,
                                              std::uint64_t trial = 0) {
    for (std::size_t i = 0; i < records.size(); ++i) {
        CounterRng rng(seed, trial, i);
        records[i].sampled = sample_one(records[i].expected, model, rng);
    }
    return records;
}

struct MCReport {
    std::size_t samples = 0;
    std::vector<double> mean;
    std::vector<double> variance;
    std::vector<double> predicted_variance;
    double cp_fraction = 0.0;
    std::uint64_t seed = 0;
    std::vector<std::vector<double>> trial_eigenvalues;
};

// repeated state tomography with fresh counting noise each trial; coordinates
// are the Bloch components of the reconstruction
inline MCReport mc_state_reconstruction(const DensityMatrix& rho_true,
                                        const TomographicBasis& basis, const NoiseModel& model,
                                        std::size_t trials, std::uint64_t seed) {
    if (trials < 1) throw std::invalid_argument("mc_state_reconstruction: trials >= 1");
    DualBasis db = dual_basis(basis);
    const std::size_t nb = basis.elements.size();
    std::vector<double> p(nb);
    for (std::size_t m = 0; m < nb; ++m)
        p[m] = (basis.elements[m] * rho_true.mat).trace().real();

    MCReport rep;
    rep.samples = trials;
    rep.seed = seed;
    rep.mean.assign(3, 0.0);
    rep.variance.assign(3, 0.0);
    std::vector<std::vector<double>> coords(trials, std::vector<double>(3));
    std::size_t physical = 0;
    for (std::size_t t = 0; t < trials; ++t) {
        std::vector<double> probs(nb);
        for (std::size_t m = 0; m < nb; ++m) {
            CounterRng rng(seed, t, m);
            probs[m] = double(sample_one(p[m] * double(model.shots), model, rng)) /
                       double(model.shots);
        }
        DensityMatrix rec = reconstruct_state(probs, db);
        BlochVector b = to_bloch(rec);
        coords[t] = {b.a1, b.a2, b.a3};
        HermEig e = herm_eig(rec.mat);
        rep.trial_eigenvalues.push_back(e.values);
        if (e.values.back() >= 0.0) ++physical;
        for (int i = 0; i < 3; ++i) rep.mean[i] += coords[t][i];
    }
    for (int i = 0; i < 3; ++i) rep.mean[i] /= double(trials);
    for (std::size_t t = 0; t < trials; ++t)
        for (int i = 0; i < 3; ++i) {
            const double d = coords[t][i] - rep.mean[i];
            rep.variance[i] += d * d;
        }
    for (int i = 0; i < 3; ++i) rep.variance[i] /= double(trials);
    rep.cp_fraction = double(physical) / double(trials);

    // linear-inversion variance law: sigma_i^2 = (1/N) sum_m p_m tr(sigma_i D_m)^2
    rep.predicted_variance.assign(3, 0.0);
    for (int i = 0; i < 3; ++i)
        for (std::size_t m = 0; m < nb; ++m) {
            const double t1 = (pauli(i + 1) * db.duals[m]).trace().real();
            rep.predicted_variance[i] += p[m] * t1 * t1 / double(model.shots);
        }
    return rep;
}

// repeated process tomography; coordinates are tr[(sigma_i (x) sigma_j) Lambda]
inline MCReport mc_process_reconstruction(const ProcessMatrix& L_true,
                                          const TomographicBasis& inputs,
                                          const TomographicBasis& measurements,
                                          const NoiseModel& model, std::size_t trials,
                                          std::uint64_t seed) {
    if (trials < 1) throw std::invalid_argument("mc_process_reconstruction: trials >= 1");
    std::vector<CountRecord> base = expected_counts(L_true, inputs, measurements, model.shots);
    DualBasis din = dual_basis(inputs);
    DualBasis dm = dual_basis(measurements);

    MCReport rep;
    rep.samples = trials;
    rep.seed = seed;
    rep.mean.assign(16, 0.0);
    rep.variance.assign(16, 0.0);
    std::vector<std::vector<double>> coords(trials, std::vector<double>(16));
    std::size_t physical = 0;
    for (std::size_t t = 0; t < trials; ++t) {
        std::vector<CountRecord> sampled = sample_counts(base, model, seed, t);
        ProcessMatrix L = sqpt_from_counts(sampled, inputs, measurements);
        for (int i = 0; i < 4; ++i)
            for (int j = 0; j < 4; ++j)
                coords[t][i * 4 + j] = (tensor(pauli(i), pauli(j)) * L.mat).trace().real();
        HermEig e = herm_eig(L.mat);
        rep.trial_eigenvalues.push_back(e.values);
        if (e.values.back() >= 0.0) ++physical;
        for (int i = 0; i < 16; ++i) rep.mean[i] += coords[t][i];
    }
    for (int i = 0; i < 16; ++i) rep.mean[i] /= double(trials);
    for (std::size_t t = 0; t < trials; ++t)
        for (int i = 0; i < 16; ++i) {
            const double d = coords[t][i] - rep.mean[i];
            rep.variance[i] += d * d;
        }
    for (int i = 0; i < 16; ++i) rep.variance[i] /= double(trials);
    rep.cp_fraction = double(physical) / double(trials);

    rep.predicted_variance.assign(16, 0.0);
    for (int i = 0; i < 4; ++i)
        for (int j = 0; j < 4; ++j) {
            double acc = 0.0;
            std::size_t r = 0;
            for (std::size_t a = 0; a < inputs.elements.size(); ++a)
                for (std::size_t b = 0; b < measurements.elements.size(); ++b, ++r) {
                    const double pj = base[r].expected / double(model.shots);
                    const cx t1 = (pauli(i) * din.duals[a].conj()).trace();
                    const cx t2 = (pauli(j) * dm.duals[b]).trace();
                    acc += pj * std::norm(t1) * std::norm(t2) / double(model.shots);
                }
            rep.predicted_variance[i * 4 + j] = acc;
        }
    return rep;
}

struct MlOptions {
    std::size_t max_outer = 12;
    std::size_t max_inner = 4000;
    double tp_tol = 1e-6;
    double mu0 = 1.0;
};

struct MlResult {
    ProcessMatrix L;
    double objective = 0.0;
    std::size_t iterations = 0;
};

struct MlNonConvergence : std::runtime_error {
    ProcessMatrix best;
    double tp_defect = 0.0;
    MlNonConvergence(ProcessMatrix b, double d)
        : std::runtime_error("ml_estimate: TP constraint not met after iteration cap"),
          best(std::move(b)),
          tp_defect(d) {}
};

namespace detail {

inline CMatrix psd_project(const CMatrix& m) {
    HermEig e = herm_eig((m + m.adjoint()) * cx(0.5));
    const std::size_t n = m.rows();
    CMatrix out(n, n);
    for (std::size_t k = 0; k < n; ++k) {
        if (e.values[k] <= 0.0) continue;
        for (std::size_t i = 0; i < n; ++i)
            for (std::size_t j = 0; j < n; ++j)
                out(i, j) += e.values[k] * e.vectors(i, k) * std::conj(e.vectors(j, k));
    }
    return out;
}

inline double frob_inner(const CMatrix& a, const CMatrix& b) {
    double s = 0.0;
    for (std::size_t i = 0; i < a.rows(); ++i)
        for (std::size_t j = 0; j < a.cols(); ++j)
            s += (std::conj(a(i, j)) * b(i, j)).real();
    return s;
}

}  // namespace detail

// Maximum-likelihood style re-estimation: minimize sum (n_e - n(Lambda))^2 / n(Lambda)
// over the PSD cone by spectral projected gradient, with a quadratic penalty
// driving the trace-preservation constraint; the penalty weight escalates
// until the defect is small.
inline MlResult ml_estimate(const std::vector<CountRecord>& counts,
                            const TomographicBasis& inputs,
                            const TomographicBasis& measurements, const ProcessMatrix& init,
                            MlOptions opts = {}) {
    const std::size_t d = inputs.dim();
    const std::size_t n2 = d * d;

    // assemble measurement operators and observed counts in pair order
    std::vector<CMatrix> ops;
    std::vector<double> observed;
    for (std::size_t j = 0; j < inputs.elements.size(); ++j)
        for (std::size_t m = 0; m < measurements.elements.size(); ++m) {
            const CountRecord* rec = nullptr;
            for (const CountRecord& r : counts)
                if (r.input_label == inputs.names[j] &&
                    r.measurement_label == measurements.names[m]) {
                    rec = &r;
                    break;
                }
            if (!rec || rec->shots == 0)
                throw std::invalid_argument("ml_estimate: missing counts for pair (" +
                                            inputs.names[j] + ", " + measurements.names[m] + ")");
            ops.push_back(tensor(inputs.elements[j].transpose(), measurements.elements[m]) *
                          cx(double(rec->shots)));
            observed.push_back(double(rec->sampled));
        }

    auto data_term = [&](const CMatrix& L) {
        double f = 0.0;
        for (std::size_t r = 0; r < ops.size(); ++r) {
            const double n = (ops[r] * L).trace().real();
            const double den = std::max(n, 1.0);
            const double diff = observed[r] - n;
            f += diff * diff / den;
        }
        return f;
    };
    auto data_grad = [&](const CMatrix& L) {
        CMatrix g(n2, n2);
        for (std::size_t r = 0; r < ops.size(); ++r) {
            const double n = (ops[r] * L).trace().real();
            const double e = observed[r];
            double dfdn;
            if (n > 1.0)
                dfdn = -2.0 * (e - n) / n - (e - n) * (e - n) / (n * n);
            else
                dfdn = -2.0 * (e - n);
            g += ops[r] * cx(dfdn);
        }
        return g;
    };

    CMatrix L = detail::psd_project(init.mat);
    double mu = opts.mu0;
    std::size_t total_iters = 0;
    CMatrix best = init.mat;
    double best_defect = 1e300;

    for (std::size_t outer = 0; outer < opts.max_outer; ++outer) {
        auto full = [&](const CMatrix& l) {
            CMatrix defect = partial_trace(l, d, d, Side::first) - CMatrix::identity(d);
            return data_term(l) + mu * detail::frob_inner(defect, defect);
        };
        auto full_grad = [&](const CMatrix& l) {
            CMatrix defect = partial_trace(l, d, d, Side::first) - CMatrix::identity(d);
            return data_grad(l) + tensor(defect, CMatrix::identity(d)) * cx(2.0 * mu);
        };

        double f = full(L);
        CMatrix g = full_grad(L);
        double step = 1e-6;
        CMatrix prev_l = L, prev_g = g;
        bool have_prev = false;
        // non-monotone step acceptance against the worst of the last few
        // values, with Barzilai-Borwein step seeding
        std::vector<double> hist = {f};
        int stall = 0;
        for (std::size_t it = 0; it < opts.max_inner; ++it, ++total_iters) {
            if (have_prev) {
                CMatrix dl = L - prev_l;
                CMatrix dg = g - prev_g;
                const double num = std::abs(detail::frob_inner(dl, dg));
                const double den = detail::frob_inner(dg, dg);
                if (den > 0.0 && num > 0.0) step = num / den;
            }
            double fref = f;
            for (double h : hist) fref = std::max(fref, h);
            double fnew = 0.0;
            CMatrix lnew;
            bool ok = false;
            for (int bt = 0; bt < 60; ++bt) {
                lnew = detail::psd_project(L - g * cx(step));
                CMatrix move = lnew - L;
                const double m2 = detail::frob_inner(move, move);
                if (m2 < 1e-30) break;
                fnew = full(lnew);
                if (fnew <= fref - 1e-4 * m2 / step) {
                    ok = true;
                    break;
                }
                step *= 0.5;
            }
            if (!ok) break;
            prev_l = L;
            prev_g = g;
            have_prev = true;
            const double drop = f - fnew;
            L = lnew;
            f = fnew;
            hist.push_back(f);
            if (hist.size() > 10) hist.erase(hist.begin());
            g = full_grad(L);
            if (std::abs(drop) < 1e-16 * (1.0 + std::abs(f)))
                ++stall;
            else
                stall = 0;
            if (stall >= 8) break;
        }

        const double defect =
            (partial_trace(L, d, d, Side::first) - CMatrix::identity(d)).max_abs();
        if (defect < best_defect) {
            best_defect = defect;
            best = L;
        }
        if (defect <= opts.tp_tol) {
            MlResult res;
            res.L = ProcessMatrix(L, d);
            res.objective = data_term(L);
            res.iterations = total_iters;
            return res;
        }
        mu *= 10.0;
    }
    throw MlNonConvergence(ProcessMatrix(best, d), best_defect);
}

struct Discrimination {
    std::vector<double> separation;  // standardized mean distance per coordinate
    double overlap = 1.0;            // product of per-coordinate Bhattacharyya coefficients
};

inline Discrimination discriminate(const MCReport& a, const MCReport& b) {
    if (a.mean.size() != b.mean.size())
        throw DimensionError("discriminate: reports use different coordinate frames");
    Discrimination d;
    for (std::size_t i = 0; i < a.mean.size(); ++i) {
        const double va = std::max(a.variance[i], 1e-300);
        const double vb = std::max(b.variance[i], 1e-300);
        const double dm = a.mean[i] - b.mean[i];
        d.separation.push_back(std::abs(dm) / std::sqrt(0.5 * (va + vb)));
        const double bc = std::sqrt(2.0 * std::sqrt(va * vb) / (va + vb)) *
                          std::exp(-dm * dm / (4.0 * (va + vb)));
        d.overlap *= bc;
    }
    return d;
}

}  // namespace ncp

#pragma once

#include <cstdio>
#include <ostream>
#include <string>
#include <vector>

#include "oldroyd/diagnostics.hpp"

namespace oldroyd {

/// Decimal with 17 significant digits, enough to round-trip any double.
inline std::string fmt17(double x) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", x);
    return buf;
}

namespace detail {

inline void row(std::ostream& os, std::initializer_list<double> xs) {
    bool first = true;
    for (double x : xs) {
        if (!first) os << ',';
        os << fmt17(x);
        first = false;
    }
    os << '\n';
}

} // namespace detail

inline void write_ledger_csv(std::ostream& os, const EnergyLedger& ledger, double interval = 0.0) {
    os << "t,kinetic,stress_energy,dissipation_p,dissipation_2,relax,coupling,g_work,budget_residual\n";
    double next = -1e300;
    for (std::size_t i = 0; i < ledger.rows.size(); ++i) {
        const LedgerRow& r = ledger.rows[i];
        const bool last = i + 1 == ledger.rows.size();
        if (interval > 0.0 && r.t < next && !last) continue;
        detail::row(os, {r.t, r.kinetic, r.stress_energy, r.dissipation_p, r.dissipation_2, r.relax, r.coupling,
                         r.g_work, r.budget_residual});
        if (interval > 0.0) next = r.t + interval * (1.0 - 1e-12);
    }
}

struct TailRow {
    double t;
    double M;
    double tail;
};

inline void write_tail_csv(std::ostream& os, const std::vector<TailRow>& rows) {
    os << "t,M,tail\n";
    for (const auto& r : rows) detail::row(os, {r.t, r.M, r.tail});
}

inline void write_decomposition_csv(std::ostream& os, const std::vector<DecompositionSample>& series) {
    os << "t,norm_tau,norm_psi_p,norm_H_2,superposition_residual\n";
    for (const auto& s : series) {
        detail::row(os, {s.t, s.norm_tau, s.norm_psi_p, s.norm_H_2, s.superposition_residual});
    }
}

} // namespace oldroyd

#include <gtest/gtest.h>

#include <algorithm>
#include <cmath>
#include <numbers>
#include <sstream>
#include <vector>

#include "support.hpp"

using namespace oldroyd;
using testing_support::model_of;
using testing_support::random_state;

namespace {

constexpr double pi = std::numbers::pi;

LedgerRow row_at(double t, double dt, double kinetic) {
    LedgerRow r;
    r.t = t;
    r.dt = dt;
    r.kinetic = kinetic;
    return r;
}

} // namespace

TEST(Ledger, ZeroStateIsAllZero) {
    const GridSpec g(8);
    const State s{SpectralVectorField(g), SpectralTensorField(g), 0.0};
    const auto r = ledger_row(s, State{s.v, s.tau, 0.1}, model_of(FKind::power_quadratic, SystemVariant::S),
                              PhysicalParams::make(1.0, 0.5, 1.0, 0.5));
    for (double x : {r.kinetic, r.stress_energy, r.dissipation_p, r.dissipation_2, r.relax, r.coupling, r.g_work,
                     r.budget_residual, r.f_work, r.majorant}) {
        EXPECT_EQ(x, 0.0);
    }
}

TEST(Ledger, TaylorGreenHandValues) {
    const GridSpec g(16);
    ConstitutiveModel m = model_of(FKind::linear, SystemVariant::S2, 2.0, 2.0);
    m.nu0 = 0.25;
    const PhysicalParams q = PhysicalParams::make(1.0, 0.5, 0.5, 0.0);
    const State s{taylor_green(g), SpectralTensorField(g), 0.0};
    const EnergyTerms e = energy_terms(s, m, q);
    EXPECT_NEAR(e.kinetic, pi * pi, 1e-12);
    EXPECT_NEAR(e.dissipation_2, 0.5 * 2.0 * pi * pi, 1e-12);
    EXPECT_NEAR(e.f_work, 2.0 * 0.25 * 2.0 * pi * pi, 1e-12);
    EXPECT_EQ(e.stress_energy, 0.0);
    EXPECT_EQ(e.coupling, 0.0);
}

TEST(Ledger, StressTermsUseB) {
    const GridSpec g(8);
    const State s = random_state(g, 3);
    const auto q = PhysicalParams::make(2.0, 0.25, 1.0, 0.0);
    const auto e = energy_terms(s, model_of(FKind::power_quadratic, SystemVariant::S2), q);
    const double t2 = inner_product_L2(s.tau, s.tau);
    EXPECT_NEAR(e.stress_energy, t2 / (2.0 * q.b), 1e-12 * t2);
    EXPECT_NEAR(e.relax, q.a / q.b * t2, 1e-12 * t2);
    EXPECT_NEAR(e.coupling, -inner_product_L2(s.tau, sym_grad(s.v)), 1e-12 * t2);
    // S2 with g = bD: g_work = (tau, D) = -coupling
    EXPECT_NEAR(e.g_work, -e.coupling, 1e-12 * t2);

    PhysicalParams z = q;
    z.b = 0.0;
    const auto e0 = energy_terms(s, model_of(FKind::power_quadratic, SystemVariant::S2), z);
    EXPECT_EQ(e0.stress_energy, 0.0);
    EXPECT_EQ(e0.relax, 0.0);
    EXPECT_EQ(e0.g_work, 0.0);
}

TEST(Ledger, RelaxationBudgetCloses) {
    const GridSpec g(8);
    const auto q = PhysicalParams::make(2.0, 0.5, 1.0, 0.5);
    const State s{SpectralVectorField(g), scaled_identity_mode(g, 1, 0, 0.5), 0.0};
    const auto r = run(s, model_of(FKind::power_quadratic, SystemVariant::S1), q, StepControl{},
                       RunOptions{1.0, 0.0, false, 1.0, false, {}});
    ASSERT_GT(r.ledger.rows.size(), 2u);
    for (std::size_t i = 1; i < r.ledger.rows.size(); ++i) {
        const auto& row = r.ledger.rows[i];
        EXPECT_EQ(row.kinetic, 0.0);
        EXPECT_EQ(row.coupling, 0.0);
        EXPECT_GT(row.relax, 0.0);
        EXPECT_LT(row.stress_energy, r.ledger.rows[i - 1].stress_energy);
        EXPECT_LT(std::abs(row.budget_residual), 1e-8);
    }
}

TEST(Ledger, TrapezoidFallbackIsSecondOrder) {
    const GridSpec g(8);
    const auto q = PhysicalParams::make(2.0, 0.5, 1.0, 0.5);
    const auto m = model_of(FKind::power_quadratic, SystemVariant::S1);
    const State s{SpectralVectorField(g), scaled_identity_mode(g, 1, 0, 0.5), 0.0};
    auto residual = [&](double dt) {
        State after = s;
        after.tau *= std::exp(-q.a * dt);
        after.t = dt;
        return std::abs(ledger_row(s, after, m, q).budget_residual);
    };
    const double r1 = residual(0.1), r2 = residual(0.05);
    EXPECT_NEAR(r1 / r2, 4.0, 0.2);
}

TEST(EnergyInequality, ZeroDataPasses) {
    const GridSpec g(8);
    const State s{SpectralVectorField(g), SpectralTensorField(g), 0.0};
    const auto q = PhysicalParams::make(1.0, 0.5, 1.0, 0.5);
    const auto r = run(s, model_of(FKind::power_quadratic, SystemVariant::S), q, StepControl{},
                       RunOptions{0.5, 0.0, false, 1.0, false, {}});
    const auto v = check_energy_inequality(r.ledger, q, interpolation_constant(), 0.0);
    EXPECT_TRUE(v.pass);
    EXPECT_EQ(v.max_violation, 0.0);
}

TEST(EnergyInequality, PureDissipationWithoutStress) {
    const GridSpec g(16);
    ConstitutiveModel m = model_of(FKind::linear, SystemVariant::S2, 2.0, 2.0);
    m.nu0 = 0.25;
    const auto q = PhysicalParams::make(1.0, 0.5, 0.5, 0.0);
    const State s{taylor_green(g), SpectralTensorField(g), 0.0};
    StepControl c;
    c.rel_tol = 1e-10;
    c.abs_tol = 1e-12;
    const auto r = run(s, m, q, c, RunOptions{1.0, 0.0, false, 1.0, false, {}});
    ASSERT_EQ(r.status, RunStatus::completed);
    const auto v = check_energy_inequality(r.ledger, q, interpolation_constant(), 1e-8);
    EXPECT_TRUE(v.pass) << v.detail;
    EXPECT_TRUE(check_energy_monotone(r.ledger, 0.0).pass);
}

TEST(EnergyInequality, RejectsInadmissibleGamma) {
    PhysicalParams q = PhysicalParams::make(1.0, 0.5, 0.4, 0.5);
    q.gamma = 1.0;
    EXPECT_THROW(check_energy_inequality(EnergyLedger{}, q, interpolation_constant(), 0.0), std::invalid_argument);
}

TEST(EnergyInequality, FlagsEnergyGrowth) {
    EnergyLedger l;
    l.rows = {row_at(0.0, 0.0, 1.0), row_at(0.1, 0.1, 1.0), row_at(0.2, 0.1, 2.0)};
    const auto q = PhysicalParams::make(1.0, 0.5, 1.0, 0.0);
    const auto v = check_energy_inequality(l, q, interpolation_constant(), 1e-6);
    EXPECT_FALSE(v.pass);
    EXPECT_EQ(v.worst_row, 2u);
    EXPECT_NEAR(v.max_violation, 10.0 - 1e-6, 1e-9);
}

TEST(EnergyMonotone, SyntheticLedger) {
    EnergyLedger l;
    l.rows = {row_at(0.0, 0.0, 1.0), row_at(0.1, 0.1, 0.9), row_at(0.2, 0.1, 0.9 + 5e-9)};
    EXPECT_TRUE(check_energy_monotone(l, 1e-8).pass);
    EXPECT_FALSE(check_energy_monotone(l, 1e-9).pass);
}

TEST(Young, BoundAndForms) {
    EnergyLedger l;
    LedgerRow r;
    r.g_work = 1.0;
    r.coupling = -0.8;
    r.majorant = 0.5;
    l.rows = {r};
    EXPECT_TRUE(check_young_majorant(l, 1e-8, YoungForm::net_work).pass);
    const auto v = check_young_majorant(l, 1e-8, YoungForm::g_work);
    EXPECT_FALSE(v.pass);
    EXPECT_NEAR(v.max_violation, 0.5 - 1e-8, 1e-12);
}

TEST(Young, HoldsAlongAdmissibleRun) {
    const GridSpec g(16);
    State s{taylor_green(g), random_smooth<SymTensorKind>(g, {4, 3.0, 0.1}, 2), 0.0};
    zero_mean(s.tau);
    const auto q = PhysicalParams::make(2.0, 0.5, 1.0, 0.5);
    const auto m = model_of(FKind::power_quadratic, SystemVariant::S1, 3.0, 1.5);
    const auto r = run(s, m, q, StepControl{}, RunOptions{0.5, 0.0, false, 1.0, false, {}});
    ASSERT_EQ(r.status, RunStatus::completed);
    EXPECT_TRUE(check_young_majorant(r.ledger, 1e-8, YoungForm::net_work).pass);
    EXPECT_TRUE(check_young_majorant(r.ledger, 1e-8, YoungForm::g_work).pass);
    for (const auto& row : r.ledger.rows) EXPECT_NEAR(row.majorant, q.gamma * (row.dissipation_2 + row.relax), 1e-15);
}

TEST(Tail, Examples) {
    const GridSpec g(16);
    const State s = random_state(g, 5);
    const auto t = tail_profile(s.tau, {0.0, 1e6});
    EXPECT_NEAR(t[0], inner_product_L2(s.tau, s.tau), 1e-10 * t[0]);
    EXPECT_EQ(t[1], 0.0);

    GridValues<SymTensorKind> unit(g);
    for (int i = 0; i < 16; ++i)
        for (int j = 0; j < 16; ++j) {
            unit.comp[sym::xx][i * 16 + j] = std::cos(g.coordinate(i));
            unit.comp[sym::yy][i * 16 + j] = std::sin(g.coordinate(i));
        }
    const auto u = tail_profile(to_spectral(unit), {0.0, 0.5, 1.0 - 1e-12, 1.0 + 1e-12});
    EXPECT_NEAR(u[0], 4.0 * pi * pi, 1e-12);
    EXPECT_NEAR(u[1], 4.0 * pi * pi, 1e-12);
    EXPECT_NEAR(u[2], 4.0 * pi * pi, 1e-12);
    EXPECT_EQ(u[3], 0.0);
}

TEST(Tail, NonincreasingAndDominated) {
    const GridSpec g(16);
    for (std::uint64_t seed = 1; seed <= 5; ++seed) {
        const State s = random_state(g, seed);
        const auto t = tail_profile(s.tau, {0.0, 0.1, 0.2, 0.5, 1.0, 2.0, 5.0});
        const double total = inner_product_L2(s.tau, s.tau);
        for (std::size_t i = 0; i < t.size(); ++i) {
            EXPECT_LE(t[i], total * (1.0 + 1e-12));
            if (i) {
                EXPECT_LE(t[i], t[i - 1]);
            }
        }
    }
    EXPECT_THROW(tail_profile(SpectralTensorField(g), {1.0, 0.5}), std::invalid_argument);
}

TEST(Split, PartsSumToStress) {
    const GridSpec g(16);
    const State s = random_state(g, 6);
    const auto tp = to_physical(s.tau);
    std::vector<double> mags(g.point_count());
    for (std::size_t i = 0; i < mags.size(); ++i) mags[i] = std::sqrt(pointwise_norm2(tp, i));
    std::nth_element(mags.begin(), mags.begin() + static_cast<std::ptrdiff_t>(mags.size() / 2), mags.end());
    const auto sp = split_initial_stress(s.tau, mags[mags.size() / 2]);
    EXPECT_LT(norm_L2(sp.psi + sp.H - s.tau), 1e-13 * norm_L2(s.tau));
    EXPECT_GT(norm_L2(sp.psi), 0.0);
    EXPECT_GT(norm_L2(sp.H), 0.0);

    const auto all = split_initial_stress(s.tau, 1e9);
    EXPECT_EQ(max_abs(all.H), 0.0);
    EXPECT_LT(norm_L2(all.psi - s.tau), 1e-13 * norm_L2(s.tau));
    EXPECT_THROW(split_initial_stress(s.tau, 0.0), std::invalid_argument);
}

TEST(Decomposition, LargeSplitKeepsHZero) {
    const GridSpec g(16);
    const State s = random_state(g, 7, 1.0, 0.2);
    const auto m = model_of(FKind::power_quadratic, SystemVariant::S);
    const auto q = PhysicalParams::make(1.0, 0.5, 1.0, 0.5);
    const auto r = run(s, m, q, StepControl{}, RunOptions{0.5, 0.1, true, 1e9, false, {}});
    ASSERT_EQ(r.status, RunStatus::completed);
    for (const auto& d : r.decomposition) EXPECT_EQ(d.norm_H_2, 0.0);
    EXPECT_TRUE(check_superposition(r.decomposition).pass);
    EXPECT_TRUE(check_H_decay(r.decomposition, q.a).monotone.pass);
}

TEST(Decomposition, RestingFluidFollowsEnvelopes) {
    const GridSpec g(8);
    const auto q = PhysicalParams::make(2.0, 0.5, 1.0, 0.3);
    const State s{SpectralVectorField(g), scaled_identity_mode(g, 1, 1, 0.5), 0.0};
    const auto m = model_of(FKind::power_quadratic, SystemVariant::S, 3.0, 1.5);
    const auto r = run(s, m, q, StepControl{}, RunOptions{1.0, 0.25, true, 0.3, false, {}});
    ASSERT_EQ(r.status, RunStatus::completed);
    ASSERT_EQ(r.decomposition.size(), 5u);
    const auto decay = check_H_decay(r.decomposition, q.a);
    EXPECT_TRUE(decay.monotone.pass);
    EXPECT_TRUE(decay.envelope_ok);
    EXPECT_LT(decay.envelope_error, 1e-6);
    EXPECT_TRUE(check_psi_lp_bound(r.decomposition, m.p_exp, mu_tilde_sup(m, q)).pass);
    for (const auto& d : r.decomposition) {
        EXPECT_EQ(d.d_integral, 0.0);
        const double expected = std::exp(-q.a * d.t) * r.decomposition.front().norm_psi_p;
        EXPECT_NEAR(d.norm_psi_p, expected, 1e-6 * expected);
    }
}

TEST(Decomposition, SuperpositionAlongNonlinearRun) {
    const GridSpec g(16);
    const State s = random_state(g, 8, 1.0, 0.5);
    for (auto v : {SystemVariant::S, SystemVariant::S1}) {
        const auto m = model_of(FKind::power_quadratic, v, 3.0, 1.5);
        const auto q = PhysicalParams::make(2.0, 0.5, 1.0, 0.5);
        const auto r = run(s, m, q, StepControl{}, RunOptions{0.5, 0.1, true, 0.3, false, {}});
        ASSERT_EQ(r.status, RunStatus::completed);
        EXPECT_TRUE(check_superposition(r.decomposition).pass);
        EXPECT_TRUE(check_H_decay(r.decomposition, q.a).monotone.pass);
        EXPECT_TRUE(check_psi_lp_bound(r.decomposition, m.p_exp, mu_tilde_sup(m, q)).pass);
    }
}

TEST(Decomposition, CheckersFlagSyntheticFailures) {
    std::vector<DecompositionSample> series(2);
    series[0].norm_tau = 1.0;
    series[0].norm_H_2 = 1.0;
    series[0].norm_psi_p = 1.0;
    series[1].t = 1.0;
    series[1].norm_tau = 1.0;
    series[1].norm_H_2 = 1.1;
    series[1].norm_psi_p = 2.0;
    series[1].superposition_residual = 1e-3;
    EXPECT_FALSE(check_superposition(series).pass);
    EXPECT_FALSE(check_H_decay(series, 1.0).monotone.pass);
    EXPECT_FALSE(check_psi_lp_bound(series, 3.0, 1.0).pass);
    series[1].d_integral = 1.0;
    EXPECT_TRUE(check_psi_lp_bound(series, 3.0, 1.0).pass);
}

TEST(Csv, HeadersAndPrecision) {
    EnergyLedger l;
    LedgerRow r;
    r.t = 0.1;
    r.kinetic = 1.0 / 3.0;
    l.rows = {r};
    std::ostringstream os;
    write_ledger_csv(os, l);
    EXPECT_EQ(os.str(), "t,kinetic,stress_energy,dissipation_p,dissipation_2,relax,coupling,g_work,budget_residual\n"
                        "0.10000000000000001,0.33333333333333331,0,0,0,0,0,0,0\n");
    std::ostringstream tail;
    write_tail_csv(tail, {{0.0, 0.5, 2.0}});
    EXPECT_EQ(tail.str(), "t,M,tail\n0,0.5,2\n");
    std::ostringstream dec;
    write_decomposition_csv(dec, {});
    EXPECT_EQ(dec.str(), "t,norm_tau,norm_psi_p,norm_H_2,superposition_residual\n");
    EXPECT_EQ(std::stod(fmt17(0.1)), 0.1);
}

TEST(Csv, LedgerIntervalThinsRows) {
    EnergyLedger l;
    for (int i = 0; i <= 10; ++i) l.rows.push_back(row_at(0.1 * i, 0.1, 1.0));
    std::ostringstream os;
    write_ledger_csv(os, l, 0.25);
    std::size_t lines = 0;
    for (char c : os.str()) lines += c == '\n';
    // header, t = 0, 0.3, 0.6, 0.9 and the final row
    EXPECT_EQ(lines, 6u);
}

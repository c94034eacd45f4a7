// Copyright 2026 The spinqec Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.


#include "spinqec/qec_sim.hpp"

#include <cmath>
#include <map>

#include "gtest/gtest.h"

using namespace spinqec;

namespace {

const QecSimulator& full_sim() {
    static const QecSimulator sim(DecoderMode::Full);
    return sim;
}

const DetectionCase& find_case(const QecSimulator& sim, const std::string& label) {
    for (const auto& c : sim.cases())
        if (c.label == label) return c;
    throw std::runtime_error("no case " + label);
}

ProductState st(double a, double b, double c) { return {level_of(a), level_of(b), level_of(c)}; }

// Whether some rotation in the block has |cos| or |sin| equal to `value`.
bool has_angle(const Block& b, double value) {
    for (const auto& g : b.gates) {
        if (g.kind != Gate::Kind::Rotation) continue;
        if (std::abs(std::abs(std::cos(g.theta)) - value) < 1e-12) return true;
        if (std::abs(std::abs(std::sin(g.theta)) - value) < 1e-12) return true;
    }
    return false;
}

CVector enc_reference(Complex alpha, Complex beta) {
    CVector v(kRegisterDim, Complex{0.0, 0.0});
    const double a = std::sqrt(2.0 / 16.0), b = std::sqrt(7.0 / 16.0);
    v[register_index(st(-3.5, -3.5, -3.5))] += alpha * a;
    v[register_index(st(-1.5, -1.5, -1.5))] += alpha * b;
    v[register_index(st(2.5, 2.5, 2.5))] += alpha * b;
    v[register_index(st(3.5, 3.5, 3.5))] += beta * a;
    v[register_index(st(1.5, 1.5, 1.5))] += beta * b;
    v[register_index(st(-2.5, -2.5, -2.5))] -= beta * b;
    return v;
}

}  // namespace

TEST(qec_sim, RegisterLayout) {
    EXPECT_EQ(register_index({0, 0, 0}, 0), 0u);
    EXPECT_EQ(register_index({0, 0, 0}, 1), 1u);
    EXPECT_EQ(register_index({0, 0, 1}, 0), 2u);
    EXPECT_EQ(register_index({7, 7, 7}, 1), kRegisterDim - 1);
    auto reg = init_register(0.6, 0.8);
    EXPECT_NEAR(reg.norm(), 1.0, 1e-15);
    EXPECT_EQ(reg.amplitude(st(-3.5, -3.5, -3.5)), Complex(0.6));
    EXPECT_EQ(reg.amplitude(st(-2.5, -3.5, -3.5)), Complex(0.8));
    EXPECT_THROW(init_register(1.0, 1.0), PreconditionError);
}

TEST(qec_sim, PiRotationSwapsLevels) {
    auto reg = QuditRegister::basis({0, 0, 0});
    apply_gate(reg, Gate::rotation(0, 0, 3, std::acos(-1.0) / 2.0));
    EXPECT_NEAR(std::abs(reg.amplitude({3, 0, 0})), 1.0, 1e-15);
    apply_gate(reg, Gate::rotation(1, 0, 5, std::acos(-1.0) / 2.0, {{0, 2}}));
    EXPECT_NEAR(std::abs(reg.amplitude({3, 0, 0})), 1.0, 1e-15);
    apply_gate(reg, Gate::controlled_double_pi({0, 3}, 1, 2, 0, 4));
    EXPECT_NEAR(std::abs(reg.amplitude({3, 4, 4})), 1.0, 1e-15);
    EXPECT_EQ(Gate::controlled_double_pi({0, 3}, 1, 2, 0, 4).pulses(), 2);
    EXPECT_EQ(Gate::rotation(0, 0, 1, 0.3).pulses(), 1);
    Gate g = Gate::rotation(2, 1, 6, 0.4, {{0, 1}});
    apply_gate(reg, g);
    apply_gate(reg, g.inverse());
    EXPECT_NEAR(std::abs(reg.amplitude({3, 4, 4})), 1.0, 1e-15);
}

TEST(qec_sim, AncillaExcitationAndMeasurement) {
    QuditRegister reg(enc_reference(std::sqrt(0.5), std::sqrt(0.5)));
    apply_gate(reg, Gate::ancilla_excitation({st(-3.5, -3.5, -3.5), st(3.5, 3.5, 3.5)}));
    EXPECT_NEAR(reg.ancilla_excited_probability(), 2.0 / 16.0, 1e-14);
    QuditRegister copy = reg;
    EXPECT_NEAR(copy.project_ancilla(1), 2.0 / 16.0, 1e-14);
    EXPECT_NEAR(copy.norm(), 1.0, 1e-14);
    EXPECT_NEAR(reg.project_ancilla(0), 14.0 / 16.0, 1e-14);
}

TEST(qec_sim, EncodeReachesCodeState) {
    const Block enc = enc_block(), ent = entangle_block();
    EXPECT_LT(enc.max_deviation(), 1e-12);
    EXPECT_LT(ent.max_deviation(), 1e-12);
    for (double v : {std::sqrt(2.0 / 16.0), std::sqrt(7.0 / 16.0), std::sqrt(0.5), std::sqrt(7.0 / 9.0)})
        EXPECT_TRUE(has_angle(enc, v)) << v;
    EXPECT_EQ(ent.gates.size(), 5u);
    EXPECT_EQ(ent.pulses(), 10);

    for (auto [a, b] : bloch_grid()) {
        auto reg = full_sim().encode(a, b);
        EXPECT_GT(fidelity(reg.amplitudes(), enc_reference(a, b)), 1.0 - 1e-12);
    }
    auto [z, o] = register_codewords();
    EXPECT_LT(max_abs_diff(ComplexMatrix(kRegisterDim, 1, z), ComplexMatrix(kRegisterDim, 1, enc_reference(1.0, 0.0))),
              1e-15);
    EXPECT_LT(max_abs_diff(ComplexMatrix(kRegisterDim, 1, o), ComplexMatrix(kRegisterDim, 1, enc_reference(0.0, 1.0))),
              1e-15);
}

TEST(qec_sim, LinearErrorListing) {
    const Complex alpha = 0.6, beta = 0.8;
    CVector got = apply_error_operator(enc_reference(alpha, beta), ErrorEvent::parse("X_A"));
    CVector want(kRegisterDim, Complex{0.0, 0.0});
    const double a = std::sqrt(2.0 / 16.0), b = std::sqrt(7.0 / 16.0);
    const double s7 = std::sqrt(7.0) / 2.0, s12 = std::sqrt(12.0) / 2.0, s15 = std::sqrt(15.0) / 2.0;
    want[register_index(st(-2.5, -3.5, -3.5))] = alpha * a * s7;
    want[register_index(st(-2.5, -1.5, -1.5))] = alpha * b * s12;
    want[register_index(st(-0.5, -1.5, -1.5))] = alpha * b * s15;
    want[register_index(st(1.5, 2.5, 2.5))] = alpha * b * s12;
    want[register_index(st(3.5, 2.5, 2.5))] = alpha * b * s7;
    want[register_index(st(2.5, 3.5, 3.5))] = beta * a * s7;
    want[register_index(st(2.5, 1.5, 1.5))] = beta * b * s12;
    want[register_index(st(0.5, 1.5, 1.5))] = beta * b * s15;
    want[register_index(st(-1.5, -2.5, -2.5))] = -beta * b * s12;
    want[register_index(st(-3.5, -2.5, -2.5))] = -beta * b * s7;
    for (std::size_t k = 0; k < kRegisterDim; ++k) EXPECT_NEAR(std::abs(got[k] - want[k]), 0.0, 1e-15) << k;

    // Linear images are orthogonal to both code words.
    auto [z, o] = register_codewords();
    for (const char* e : {"X_A", "Y_A", "X_B", "Y_C"}) {
        CVector w = apply_error_operator(z, ErrorEvent::parse(e));
        EXPECT_LT(std::abs(inner(z, w)), 1e-12) << e;
        EXPECT_LT(std::abs(inner(o, w)), 1e-12) << e;
    }
}

TEST(qec_sim, QuadraticOverlap) {
    auto [z, o] = register_codewords();
    CVector w = apply_error_operator(z, ErrorEvent::parse("XX_A"));
    EXPECT_NEAR(std::norm(norm(w)), 357.0 / 8.0, 1e-12);
    EXPECT_NEAR(inner(z, w).real(), 21.0 / 4.0, 1e-13);
    EXPECT_NEAR(inner(o, apply_error_operator(o, ErrorEvent::parse("XX_A"))).real(), 21.0 / 4.0, 1e-13);
}

TEST(qec_sim, ErrorParsing) {
    EXPECT_EQ(ErrorEvent::parse("none").label(), "I");
    EXPECT_EQ(ErrorEvent::parse("YZ_C").qudit, 2);
    EXPECT_THROW(ErrorEvent::parse("X_D"), PreconditionError);
    EXPECT_THROW(ErrorEvent::parse("ZX_A"), PreconditionError);
    EXPECT_EQ(correctable_errors().size(), 30u);
    QuditRegister empty(CVector(kRegisterDim, Complex{0.0, 0.0}));
    EXPECT_THROW(apply_error(empty, ErrorEvent::parse("Z_A")), AnnihilationError);
}

TEST(qec_sim, DecoderStructure) {
    const auto& sim = full_sim();
    EXPECT_EQ(sim.cases().front().label, "I");
    EXPECT_EQ(sim.cases().size() + sim.dropped().size(), 28u);
    const auto& id = sim.cases().front();
    for (double v : {std::sqrt(0.5), std::sqrt(2.0 / 16.0)}) EXPECT_TRUE(has_angle(id.dec, v)) << v;
    const auto& x = find_case(sim, "X_A");
    for (double v : {std::sqrt(14.0 / 29.0), std::sqrt(12.0 / 41.0), std::sqrt(7.0 / 48.0)})
        EXPECT_TRUE(has_angle(x.dec, v)) << v;
    EXPECT_TRUE(has_angle(x.disentangle, std::sqrt(1.0 / 7.0)));
    for (const auto& c : sim.cases()) {
        EXPECT_LT(concatenate("U", {&c.disentangle, &c.dec}).max_deviation(), 1e-9) << c.label;
        EXPECT_EQ(c.detect.pulses(), 2) << c.label;
    }
}

TEST(qec_sim, DisentangleOfIdentityInvertsEntangle) {
    const auto& id = full_sim().cases().front();
    ComplexMatrix product = id.disentangle.matrix() * entangle_block().matrix();
    EXPECT_LT(max_abs_diff(product, ComplexMatrix::identity(kRegisterDim)), 1e-10);
}

TEST(qec_sim, BlocksAreUnitary) {
    EXPECT_LT(enc_block().unitarity_defect(), 1e-10);
    EXPECT_LT(entangle_block().unitarity_defect(), 1e-10);
    for (const auto& c : full_sim().cases()) {
        EXPECT_LT(c.disentangle.unitarity_defect(), 1e-10) << c.label;
        EXPECT_LT(c.dec.unitarity_defect(), 1e-10) << c.label;
        EXPECT_LT(c.recovery.unitarity_defect(), 1e-10) << c.label;
    }
}

TEST(qec_sim, EveryCorrectableErrorIsRecovered) {
    const auto& sim = full_sim();
    for (const auto& e : correctable_errors()) {
        for (auto [a, b] : bloch_grid()) {
            QuditRegister reg = sim.encode(a, b);
            apply_error(reg, e);
            BranchResult r = sim.detect_exact(reg, a, b);
            double total = r.uncorrectable_weight;
            for (const auto& br : r.branches) {
                EXPECT_GT(br.logical_fidelity, 1.0 - 1e-9) << e.label() << " " << br.detected_case;
                total += br.weight;
            }
            EXPECT_NEAR(total, 1.0, 1e-10);
            EXPECT_LT(r.uncorrectable_weight, 1e-10) << e.label();
        }
    }
}

TEST(qec_sim, QuadraticErrorNoErrorBranchWeight) {
    const auto& sim = full_sim();
    QuditRegister reg = sim.encode(0.6, 0.8);
    apply_error(reg, ErrorEvent::parse("XX_A"));
    BranchResult r = sim.detect_exact(reg, 0.6, 0.8);
    ASSERT_FALSE(r.branches.empty());
    EXPECT_EQ(r.branches.front().detected_case, "I");
    const double c = 21.0 / 4.0 * std::sqrt(8.0 / 357.0);
    EXPECT_NEAR(r.branches.front().weight, c * c, 1e-10);
}

TEST(qec_sim, ZBiasedDecoder) {
    QecSimulator sim(DecoderMode::ZBiased);
    for (const char* e : {"Z_A", "ZZ_B", "XZ_C", "YZ_A"}) {
        QuditRegister reg = sim.encode(0.6, Complex(0.0, 0.8));
        apply_error(reg, ErrorEvent::parse(e));
        BranchResult r = sim.detect_exact(reg, 0.6, Complex(0.0, 0.8));
        EXPECT_LT(r.uncorrectable_weight, 1e-10) << e;
        for (const auto& br : r.branches) EXPECT_GT(br.logical_fidelity, 1.0 - 1e-9) << e;
    }
    EXPECT_LT(sim.pulse_budget().cycle, full_sim().pulse_budget().cycle);
}

TEST(qec_sim, SampledOutcomesMatchProjections) {
    const auto& sim = full_sim();
    const Complex a = 0.6, b = 0.8;
    QuditRegister reg = sim.encode(a, b);
    apply_error(reg, ErrorEvent::parse("XX_A"));
    std::map<std::string, double> expected;
    for (const auto& br : sim.detect_exact(reg, a, b).branches) expected[br.detected_case] = br.weight;

    const int n = 10000;
    std::map<std::string, int> counts;
    std::mt19937_64 rng(12345);
    for (int t = 0; t < n; ++t) {
        SyndromeRecord r = sim.detect_sampled(reg, a, b, rng);
        ASSERT_TRUE(r.detected);
        EXPECT_GT(r.logical_fidelity, 1.0 - 1e-9);
        ++counts[r.detected_case];
    }
    for (const auto& [label, p] : expected) {
        const double sigma = std::sqrt(p * (1.0 - p) / n);
        EXPECT_NEAR(counts[label] / double(n), p, 3.0 * sigma + 1e-12) << label;
    }
}

TEST(qec_sim, BudgetAndThreshold) {
    auto b = full_sim().pulse_budget();
    EXPECT_EQ(b.encode, enc_block().pulses() + 10);
    int sum = 0;
    for (const auto& [label, n] : b.per_case) sum += n;
    EXPECT_EQ(sum, b.cycle);

    Threshold t = fidelity_threshold(1700);
    EXPECT_TRUE(t.attainable);
    EXPECT_GT(t.max_pulse_infidelity, 1e-6);
    EXPECT_LT(t.max_pulse_infidelity, 1e-4);
    const double e = 1e-3;
    EXPECT_NEAR(t.unprotected_survival, std::pow(1 - e, 9), 1e-15);
    EXPECT_NEAR(t.protected_survival, std::pow(1 - e, 27) + 27 * e * std::pow(1 - e, 26), 1e-15);
    EXPECT_NEAR(std::pow(t.min_pulse_fidelity, 1700) * t.protected_survival, t.unprotected_survival, 1e-12);
    EXPECT_THROW(fidelity_threshold(0), PreconditionError);
}

TEST(qec_sim, PulseListJson) {
    const std::string js = entangle_block().pulse_list_json();
    EXPECT_NE(js.find("\"controls\""), std::string::npos);
}

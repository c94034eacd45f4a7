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

#pragma once

#include <array>
#include <cstdint>
#include <random>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "spinqec/error.hpp"
#include "spinqec/linalg.hpp"

namespace spinqec {

/// Three spin-7/2 qudits A, B, C and a spin-1/2 ancilla, in that tensor order.
/// Qudit levels are indexed 0..7 for m = -7/2..+7/2.
inline constexpr int kLevels = 8;
inline constexpr std::size_t kRegisterDim = 8 * 8 * 8 * 2;

inline int level_of(double m) { return static_cast<int>(m + 3.5); }
inline double projection_of(int level) { return level - 3.5; }

struct ProductState {
    int a = 0;
    int b = 0;
    int c = 0;

    friend bool operator==(const ProductState&, const ProductState&) = default;
};

std::size_t register_index(ProductState s, int ancilla = 0);

class QuditRegister {
   public:
    QuditRegister();
    explicit QuditRegister(CVector amplitudes);
    static QuditRegister basis(ProductState s, int ancilla = 0);

    const CVector& amplitudes() const { return amps_; }
    CVector& amplitudes() { return amps_; }
    Complex amplitude(ProductState s, int ancilla = 0) const { return amps_[register_index(s, ancilla)]; }
    double norm() const;
    void normalize();
    /// Probability of ancilla = 1.
    double ancilla_excited_probability() const;
    /// Projects the ancilla onto `outcome` and renormalizes; returns the
    /// outcome's probability.
    double project_ancilla(int outcome);

   private:
    CVector amps_;
};

/// (alpha|-7/2> + beta|-5/2>)_A |-7/2>_B |-7/2>_C |0>_anc.
QuditRegister init_register(Complex alpha, Complex beta);

struct Control {
    int qudit = 0;
    int level = 0;
};

/// Elementary operations. Rotations are about y: R(theta) sends |l1> to
/// cos(theta)|l1> + sin(theta)|l2> and |l2> to -sin(theta)|l1> + cos(theta)|l2>,
/// so theta = pi/2 is a pi pulse.
struct Gate {
    enum class Kind { Rotation, ControlledDoublePi, AncillaExcitation };

    Kind kind = Kind::Rotation;
    int qudit = 0;
    int level1 = 0;
    int level2 = 0;
    double theta = 0.0;
    /// Rotation: product conditions on other qudits. ControlledDoublePi: the
    /// single control.
    std::vector<Control> controls;
    /// ControlledDoublePi: the two target qudits, both rotated on (level1, level2).
    std::array<int, 2> targets{1, 2};
    /// AncillaExcitation: product states on which the ancilla is rotated.
    std::vector<ProductState> conditions;

    static Gate rotation(int qudit, int level1, int level2, double theta, std::vector<Control> controls = {});
    static Gate controlled_double_pi(Control control, int target1, int target2, int level1, int level2);
    static Gate ancilla_excitation(std::vector<ProductState> conditions);

    Gate inverse() const;
    /// One per addressed transition; the double-pi gate addresses two.
    int pulses() const;
    bool is_pi() const;
};

void apply_gate(QuditRegister& reg, const Gate& g);
void apply_gate(std::span<Complex> amps, const Gate& g);

struct Block {
    std::string name;
    std::vector<Gate> gates;
    /// (input, required output) pairs defining the block.
    std::vector<std::pair<CVector, CVector>> target_map;

    int pulses() const;
    Block inverse(std::string new_name) const;
    void apply(QuditRegister& reg) const;
    void apply(std::span<Complex> amps) const;
    /// Smallest |<out|U in>|^2 over the target map (1 for an empty map).
    double min_fidelity() const;
    /// Largest ||U in - out|| over the target map.
    double max_deviation() const;
    /// Dense 1024 x 1024 matrix.
    ComplexMatrix matrix() const;
    /// max |U^dagger U - 1| elementwise.
    double unitarity_defect() const;
    /// Ordered pulse list: qudit, level pair (as m values), axis, angle, controls.
    std::string pulse_list_json() const;
};

inline void apply_block(QuditRegister& reg, const Block& b) { b.apply(reg); }

/// Concatenates gate lists in order.
Block concatenate(std::string name, const std::vector<const Block*>& parts);

struct SynthesisOptions {
    std::size_t max_gates = 4096;
    double tolerance = 1e-10;
};

/// Builds a gate list realizing target_map: each state is driven onto a basis
/// pivot by merging amplitude along single-qudit transitions, first moving
/// qudits B and C onto the pivot's levels (controlled on the other qudits),
/// then chaining the remaining A levels into the pivot in order of decreasing
/// distance. Inputs and outputs must be real up to a sign.
Block synthesize_block(std::string name, std::vector<std::pair<CVector, CVector>> target_map,
                       const SynthesisOptions& options = {});

/// Synthesis result split at the first gate of the slice-chaining stage.
struct SplitBlock {
    Block disentangle;
    Block dec;
};
SplitBlock synthesize_split_block(std::string_view label, std::vector<std::pair<CVector, CVector>> target_map,
                                  const SynthesisOptions& options = {});

Block enc_block();
Block entangle_block();

/// Encoded code words |0_L>, |1_L> on the register (ancilla 0).
std::pair<CVector, CVector> register_codewords();

/// Label of a first-order operator ("1", "X", "XY", ...) on one qudit.
struct ErrorEvent {
    int qudit = 0;
    std::string op = "1";
    double weight = 1.0;

    std::string label() const;
    /// "X_A", "ZZ_C", "1" (or "none").
    static ErrorEvent parse(std::string_view label);
};

class AnnihilationError : public NumericalError {
   public:
    using NumericalError::NumericalError;
};

/// All single-qudit first-order errors (10 per qudit including identity).
std::vector<ErrorEvent> correctable_errors();

/// Applies the operator, renormalizes, returns the squared norm before
/// normalization.
double apply_error(QuditRegister& reg, const ErrorEvent& e);
CVector apply_error_operator(std::span<const Complex> amps, const ErrorEvent& e);

enum class DecoderMode { Full, ZBiased };

struct DetectionCase {
    std::string label;
    ErrorEvent error;
    /// Pivots that receive the projected |0_L> and |1_L> images.
    ProductState pivot0;
    ProductState pivot1;
    Block disentangle;
    Block dec;
    Block detect;
    Block recovery;
    CVector q0;
    CVector q1;

    int pulses() const { return disentangle.pulses() + dec.pulses() + detect.pulses() + recovery.pulses(); }
};

struct SyndromeRecord {
    std::string detected_case;
    std::vector<int> ancilla_outcomes;
    Complex alpha_hat;
    Complex beta_hat;
    double logical_fidelity = 0.0;
    bool detected = false;
    /// Probability of this branch (exact-branch mode) or 1 (sampled).
    double weight = 1.0;
};

struct BranchResult {
    std::vector<SyndromeRecord> branches;
    double uncorrectable_weight = 0.0;
};

struct PulseBudget {
    int encode = 0;
    int cycle = 0;
    std::vector<std::pair<std::string, int>> per_case;
    std::vector<std::string> dropped;
};

struct ThresholdModel {
    double error_probability = 1e-3;
    int operators_per_qudit = 9;
    int qudits = 3;
};

struct Threshold {
    double min_pulse_fidelity = 1.0;
    double max_pulse_infidelity = 0.0;
    double unprotected_survival = 0.0;
    double protected_survival = 0.0;
    bool attainable = true;
};

/// Break-even single-pulse fidelity p: protected survival times p^pulses
/// equals the survival of one unprotected qudit, with every first-order
/// operator equally likely.
Threshold fidelity_threshold(int pulses, const ThresholdModel& model = {});

class QecSimulator {
   public:
    explicit QecSimulator(DecoderMode mode = DecoderMode::Full);

    DecoderMode mode() const { return mode_; }
    const Block& enc() const { return enc_; }
    const Block& entangle() const { return entangle_; }
    const std::vector<DetectionCase>& cases() const { return cases_; }
    /// Case labels whose images were linearly dependent on earlier ones.
    const std::vector<std::string>& dropped() const { return dropped_; }
    const CVector& zero_l() const { return zero_l_; }
    const CVector& one_l() const { return one_l_; }

    /// ENC then ENTANGLE on init_register(alpha, beta).
    QuditRegister encode(Complex alpha, Complex beta) const;

    BranchResult detect_exact(const QuditRegister& reg, Complex alpha, Complex beta) const;
    SyndromeRecord detect_sampled(const QuditRegister& reg, Complex alpha, Complex beta, std::mt19937_64& rng) const;

    PulseBudget pulse_budget() const;

   private:
    DecoderMode mode_;
    Block enc_;
    Block entangle_;
    CVector zero_l_;
    CVector one_l_;
    std::vector<DetectionCase> cases_;
    std::vector<std::string> dropped_;
};

/// 12 icosahedron vertices on the Bloch sphere as (alpha, beta).
std::vector<std::pair<Complex, Complex>> bloch_grid();

/// One full cycle: encode, apply `error`, detect. `seed` drives sampling.
struct Trajectory {
    std::uint64_t seed = 0;
    ErrorEvent error;
    Complex alpha;
    Complex beta;
    SyndromeRecord record;

    std::string to_json() const;
};

}  // namespace spinqec

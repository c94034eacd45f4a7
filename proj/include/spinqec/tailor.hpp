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

#include <functional>
#include <memory>
#include <string>
#include <string_view>
#include <vector>

#include "spinqec/codeword.hpp"
#include "spinqec/error.hpp"
#include "spinqec/spin_model.hpp"

namespace spinqec {

/// Named KL conditions on a dressed single-qudit code. "diag-*" is
/// <0_L|O|0_L> - <1_L|O|1_L>, "offdiag-*" is <0_L|O|1_L>, with O the bare
/// nuclear operator or product of two.
enum class Condition { DiagIZ, DiagIXIX, DiagIXIY, DiagIYIY, DiagIZIZ, OffdiagIXIX, OffdiagIXIY };

inline constexpr Condition kAllConditions[] = {Condition::DiagIZ,   Condition::DiagIXIX,    Condition::DiagIXIY,
                                               Condition::DiagIYIY, Condition::DiagIZIZ,    Condition::OffdiagIXIX,
                                               Condition::OffdiagIXIY};

std::string_view condition_name(Condition c);
Condition parse_condition(std::string_view name);

class EmptyContourError : public NumericalError {
   public:
    using NumericalError::NumericalError;
};

struct Point2 {
    double e1 = 0.0;
    double e2 = 0.0;
};

struct Box {
    double lo1 = -0.05;
    double hi1 = 0.05;
    double lo2 = -0.05;
    double hi2 = 0.05;

    static Box square(double half_width) { return {-half_width, half_width, -half_width, half_width}; }
};

/// Real-valued function of the two distortion angles.
class ResidualFunction {
   public:
    ResidualFunction(std::string name, std::function<double(double, double)> f)
        : name_(std::move(name)), f_(std::move(f)) {}

    double operator()(double e1, double e2) const { return f_(e1, e2); }
    const std::string& name() const { return name_; }

   private:
    std::string name_;
    std::function<double(double, double)> f_;
};

/// A two-parameter code family on one system at one field, with the dressed
/// spectrum computed once.
class TailoringProblem {
   public:
    TailoringProblem(CodeFamily family, SpinSystem sys, double b_tesla);

    CodeFamily family() const { return family_; }
    const SpinSystem& system() const { return sys_; }
    double field() const { return b_; }

    CodeWord codeword(double e1, double e2) const;
    /// Complex value of the condition's matrix element (difference).
    Complex raw(Condition c, double e1, double e2) const;
    /// Re + Im of raw(); Hermitian diagonal conditions are real.
    double signed_residual(Condition c, double e1, double e2) const;
    ResidualFunction residual(Condition c) const;

   private:
    CodeFamily family_;
    SpinSystem sys_;
    double b_;
    std::shared_ptr<const std::vector<DressedState>> states_;
    std::shared_ptr<const ErrorSet> ops_;
};

using Polyline = std::vector<Point2>;

/// Zero set of `f` on `box` by marching squares with grid spacing `step`.
/// Every vertex is refined by bisection along its grid edge to |f| < 1e-10
/// (or to the last representable split). Throws EmptyContourError when f
/// has no sign change on the grid.
std::vector<Polyline> trace_zero_contour(const ResidualFunction& f, Box box, double step);

/// Crossing points of two sets of polylines.
std::vector<Point2> contour_intersections(const std::vector<Polyline>& a, const std::vector<Polyline>& b);

struct NewtonOptions {
    double jacobian_step = 1e-7;
    double step_tolerance = 1e-13;
    double residual_tolerance = 1e-13;
    int max_iterations = 100;
};

struct NewtonResult {
    Point2 point;
    int iterations = 0;
    bool converged = false;
    double residual = 0.0;
};

NewtonResult newton_solve_2d(const ResidualFunction& f, const ResidualFunction& g, Point2 seed,
                             const NewtonOptions& options = {});

struct TailorOptions {
    double half_width = 0.05;
    double max_half_width = 0.2;
    /// Grid cells per side of the search box.
    int grid_cells = 400;
    NewtonOptions newton;
};

struct TailoringSolution {
    double eps1 = 0.0;
    double eps2 = 0.0;
    bool converged = false;
    int iterations = 0;
    std::vector<Condition> targets;
    /// |signed residual| for every condition at the solution.
    std::vector<std::pair<Condition, double>> residuals;
    /// All distinct converged roots, nearest to the origin first.
    std::vector<Point2> roots;
    /// Number of target-contour crossings in the final search box.
    std::size_t intersections = 0;
    double search_half_width = 0.0;
    /// Brute-force KL maximum over {1, I_X, I_Y, I_Z} at the solution.
    double kl_max = 0.0;
    /// |<0_L|I_X I_Y|1_L>| at the solution.
    double leftover = 0.0;
    CodeWord codeword;

    double residual(Condition c) const;
    std::string to_json() const;
};

/// Zeroes diag-IZ and diag-IXIX of the tailored spin-9/2 code, then checks
/// the full {1, I_X, I_Y, I_Z} KL set by brute force (< 1e-10).
TailoringSolution solve_full_tailoring_92(const SpinSystem& sys, double b_tesla, const TailorOptions& options = {});

/// Zeroes diag-IZ and offdiag-IXIX of the distorted spin-7/2 code and
/// reports the remaining offdiag-IXIY as the leftover.
TailoringSolution solve_partial_tailoring_72(const SpinSystem& sys, double b_tesla,
                                             const TailorOptions& options = {});

/// Dispatches on the family: 9/2 families get the full solve, 7/2 the partial.
TailoringSolution solve_tailoring(CodeFamily family, const SpinSystem& sys, double b_tesla,
                                  const TailorOptions& options = {});

enum class SweepMode {
    /// Fixed (eps1, eps2) at every field.
    Fixed,
    /// Solve once at the freeze field, evaluate the frozen code everywhere.
    Frozen,
    /// Solve afresh at every field.
    Resolve,
};

struct SweepConfig {
    CodeFamily family = CodeFamily::Ideal72;
    SweepMode mode = SweepMode::Fixed;
    double eps1 = 0.0;
    double eps2 = 0.0;
    double freeze_at = 1.0;
    unsigned threads = 0;
    TailorOptions options;
};

struct SweepRow {
    double b_tesla = 0.0;
    double eps1 = 0.0;
    double eps2 = 0.0;
    bool converged = false;
    std::vector<double> residuals;  // |value| in kAllConditions order
    double kl_max = 0.0;
    std::string error;
};

std::vector<SweepRow> field_sweep_tailoring(const SpinSystem& sys, const std::vector<double>& fields,
                                            const SweepConfig& config);

/// CSV with one `#` description row, a column header, then one row per field.
std::string sweep_to_csv(const std::vector<SweepRow>& rows, std::string_view description);

}  // namespace spinqec

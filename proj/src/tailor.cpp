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

#include "spinqec/tailor.hpp"

#include <algorithm>
#include <cmath>
#include <unordered_map>

#include "detail.hpp"
#include "json.hpp"

namespace spinqec {

namespace {

struct ConditionInfo {
    Condition c;
    const char* name;
    bool diagonal;
    const char* left;   // applied second
    const char* right;  // applied first
};

constexpr ConditionInfo kConditionInfo[] = {
    {Condition::DiagIZ, "diag-IZ", true, nullptr, "Z"},
    {Condition::DiagIXIX, "diag-IXIX", true, "X", "X"},
    {Condition::DiagIXIY, "diag-IXIY", true, "X", "Y"},
    {Condition::DiagIYIY, "diag-IYIY", true, "Y", "Y"},
    {Condition::DiagIZIZ, "diag-IZIZ", true, "Z", "Z"},
    {Condition::OffdiagIXIX, "offdiag-IXIX", false, "X", "X"},
    {Condition::OffdiagIXIY, "offdiag-IXIY", false, "X", "Y"},
};

const ConditionInfo& info(Condition c) {
    for (const auto& i : kConditionInfo)
        if (i.c == c) return i;
    throw PreconditionError("unknown condition");
}

bool two_parameter(CodeFamily f) {
    return f == CodeFamily::Ideal72 || f == CodeFamily::Distorted72 || f == CodeFamily::Ideal92 ||
           f == CodeFamily::Tailored92;
}

}  // namespace

std::string_view condition_name(Condition c) { return info(c).name; }

Condition parse_condition(std::string_view name) {
    for (const auto& i : kConditionInfo)
        if (name == i.name) return i.c;
    throw PreconditionError("unknown KL condition '" + std::string(name) + "'");
}

TailoringProblem::TailoringProblem(CodeFamily family, SpinSystem sys, double b_tesla)
    : family_(family), sys_(std::move(sys)), b_(b_tesla) {
    if (!two_parameter(family)) {
        throw PreconditionError(std::string(family_name(family)) + " is not a two-parameter single-spin family");
    }
    if (!(sys_.nucleus == family_spin(family))) {
        throw PreconditionError(std::string(family_name(family)) + " needs nuclear spin " +
                                std::to_string(family_spin(family).value()) + ", system '" + sys_.name + "' has " +
                                std::to_string(sys_.nucleus.value()));
    }
    states_ = std::make_shared<const std::vector<DressedState>>(dressed_eigenstates(sys_, Field::axial(b_)));
    ops_ = std::make_shared<const ErrorSet>(embed_error_set(standard_error_set(ErrorSetKind::FirstOrderB, sys_.nucleus),
                                                            {sys_.electron.dim(), sys_.nucleus.dim()}, 1));
}

CodeWord TailoringProblem::codeword(double e1, double e2) const {
    // The ideal families reject distortions; evaluate them through their
    // distorted counterparts and restore the tag at zero.
    CodeFamily f = family_;
    if (e1 != 0.0 || e2 != 0.0) {
        if (f == CodeFamily::Ideal72) f = CodeFamily::Distorted72;
        if (f == CodeFamily::Ideal92) f = CodeFamily::Tailored92;
    }
    return make_dressed_codeword(f, sys_, Field::axial(b_), *states_, e1, e2);
}

Complex TailoringProblem::raw(Condition c, double e1, double e2) const {
    const ConditionInfo& ci = info(c);
    const CodeWord cw = codeword(e1, e2);
    auto op = [&](const CVector& v) {
        CVector w = ops_->find(ci.right).apply(v);
        if (ci.left) w = ops_->find(ci.left).apply(w);
        return w;
    };
    if (ci.diagonal) return inner(cw.zero_l, op(cw.zero_l)) - inner(cw.one_l, op(cw.one_l));
    return inner(cw.zero_l, op(cw.one_l));
}

double TailoringProblem::signed_residual(Condition c, double e1, double e2) const {
    const Complex z = raw(c, e1, e2);
    return z.real() + z.imag();
}

ResidualFunction TailoringProblem::residual(Condition c) const {
    auto self = std::make_shared<const TailoringProblem>(*this);
    return ResidualFunction(std::string(condition_name(c)),
                            [self, c](double e1, double e2) { return self->signed_residual(c, e1, e2); });
}

std::vector<Polyline> trace_zero_contour(const ResidualFunction& f, Box box, double step) {
    if (!(step > 0.0) || !(box.hi1 > box.lo1) || !(box.hi2 > box.lo2)) {
        throw PreconditionError("trace_zero_contour: empty box or non-positive step");
    }
    const auto n1 = static_cast<std::size_t>(std::ceil((box.hi1 - box.lo1) / step - 1e-9));
    const auto n2 = static_cast<std::size_t>(std::ceil((box.hi2 - box.lo2) / step - 1e-9));
    if (n1 * n2 > 25'000'000) throw PreconditionError("trace_zero_contour: grid too fine");
    const double h1 = (box.hi1 - box.lo1) / static_cast<double>(n1);
    const double h2 = (box.hi2 - box.lo2) / static_cast<double>(n2);
    auto x = [&](std::size_t i) { return box.lo1 + h1 * static_cast<double>(i); };
    auto y = [&](std::size_t j) { return box.lo2 + h2 * static_cast<double>(j); };

    const std::size_t w = n1 + 1;
    std::vector<double> v(w * (n2 + 1));
    bool any_pos = false, any_neg = false;
    for (std::size_t j = 0; j <= n2; ++j)
        for (std::size_t i = 0; i <= n1; ++i) {
            const double fv = f(x(i), y(j));
            if (!std::isfinite(fv)) throw NumericalError("trace_zero_contour: '" + f.name() + "' is not finite");
            v[j * w + i] = fv;
            (fv >= 0.0 ? any_pos : any_neg) = true;
        }
    if (!any_pos || !any_neg) throw EmptyContourError("'" + f.name() + "' has no sign change in the search box");
    auto val = [&](std::size_t i, std::size_t j) { return v[j * w + i]; };
    auto pos = [&](std::size_t i, std::size_t j) { return val(i, j) >= 0.0; };

    // Edge ids: horizontal (i,j)-(i+1,j) -> 2*(j*w+i), vertical (i,j)-(i,j+1) -> 2*(j*w+i)+1.
    auto hid = [&](std::size_t i, std::size_t j) { return 2 * (j * w + i); };
    auto vid = [&](std::size_t i, std::size_t j) { return 2 * (j * w + i) + 1; };

    std::unordered_map<std::size_t, Point2> vertex;
    auto refine = [&](std::size_t id) -> Point2 {
        if (auto it = vertex.find(id); it != vertex.end()) return it->second;
        const std::size_t base = id / 2;
        const std::size_t i = base % w, j = base / w;
        Point2 a{x(i), y(j)}, b = (id % 2 == 0) ? Point2{x(i + 1), y(j)} : Point2{x(i), y(j + 1)};
        double fa = val(i, j);
        Point2 mid = a;
        for (int it = 0; it < 200; ++it) {
            mid = {0.5 * (a.e1 + b.e1), 0.5 * (a.e2 + b.e2)};
            if ((mid.e1 == a.e1 && mid.e2 == a.e2) || (mid.e1 == b.e1 && mid.e2 == b.e2)) break;
            const double fm = f(mid.e1, mid.e2);
            if (std::abs(fm) < 1e-10) break;
            if ((fm >= 0.0) == (fa >= 0.0)) {
                a = mid;
                fa = fm;
            } else {
                b = mid;
            }
        }
        vertex.emplace(id, mid);
        return mid;
    };

    std::unordered_map<std::size_t, std::vector<std::size_t>> adj;
    auto link = [&](std::size_t a, std::size_t b) {
        adj[a].push_back(b);
        adj[b].push_back(a);
    };
    for (std::size_t j = 0; j < n2; ++j)
        for (std::size_t i = 0; i < n1; ++i) {
            const bool p0 = pos(i, j), p1 = pos(i + 1, j), p2 = pos(i + 1, j + 1), p3 = pos(i, j + 1);
            const std::size_t bottom = hid(i, j), right = vid(i + 1, j), top = hid(i, j + 1), left = vid(i, j);
            std::vector<std::size_t> cut;
            if (p0 != p1) cut.push_back(bottom);
            if (p1 != p2) cut.push_back(right);
            if (p3 != p2) cut.push_back(top);
            if (p0 != p3) cut.push_back(left);
            if (cut.size() == 2) {
                link(cut[0], cut[1]);
            } else if (cut.size() == 4) {
                const bool pc = f(0.5 * (x(i) + x(i + 1)), 0.5 * (y(j) + y(j + 1))) >= 0.0;
                if (pc == p0) {
                    link(bottom, right);
                    link(top, left);
                } else {
                    link(left, bottom);
                    link(right, top);
                }
            }
        }

    std::vector<Polyline> out;
    std::unordered_map<std::size_t, bool> seen;
    auto walk = [&](std::size_t start) {
        Polyline line;
        std::size_t prev = static_cast<std::size_t>(-1), cur = start;
        while (true) {
            seen[cur] = true;
            line.push_back(refine(cur));
            std::size_t nxt = static_cast<std::size_t>(-1);
            for (std::size_t cand : adj[cur]) {
                if (cand != prev && !seen[cand]) {
                    nxt = cand;
                    break;
                }
            }
            if (nxt == static_cast<std::size_t>(-1)) {
                // Close loops back onto their start.
                for (std::size_t cand : adj[cur])
                    if (cand == start && cand != prev && line.size() > 2) line.push_back(line.front());
                break;
            }
            prev = cur;
            cur = nxt;
        }
        out.push_back(std::move(line));
    };
    std::vector<std::size_t> keys;
    keys.reserve(adj.size());
    for (const auto& [k, _] : adj) keys.push_back(k);
    std::sort(keys.begin(), keys.end());
    for (std::size_t k : keys)
        if (adj[k].size() == 1 && !seen[k]) walk(k);
    for (std::size_t k : keys)
        if (!seen[k]) walk(k);
    if (out.empty()) throw EmptyContourError("'" + f.name() + "' has no zero crossing in the search box");
    return out;
}

std::vector<Point2> contour_intersections(const std::vector<Polyline>& a, const std::vector<Polyline>& b) {
    std::vector<Point2> hits;
    for (const auto& la : a)
        for (std::size_t i = 0; i + 1 < la.size(); ++i) {
            const Point2 p = la[i], r{la[i + 1].e1 - p.e1, la[i + 1].e2 - p.e2};
            const double amin1 = std::min(p.e1, la[i + 1].e1), amax1 = std::max(p.e1, la[i + 1].e1);
            const double amin2 = std::min(p.e2, la[i + 1].e2), amax2 = std::max(p.e2, la[i + 1].e2);
            for (const auto& lb : b)
                for (std::size_t k = 0; k + 1 < lb.size(); ++k) {
                    const Point2 q = lb[k], s{lb[k + 1].e1 - q.e1, lb[k + 1].e2 - q.e2};
                    if (std::max(q.e1, lb[k + 1].e1) < amin1 || std::min(q.e1, lb[k + 1].e1) > amax1 ||
                        std::max(q.e2, lb[k + 1].e2) < amin2 || std::min(q.e2, lb[k + 1].e2) > amax2) {
                        continue;
                    }
                    const double denom = r.e1 * s.e2 - r.e2 * s.e1;
                    if (denom == 0.0) continue;
                    const double qp1 = q.e1 - p.e1, qp2 = q.e2 - p.e2;
                    const double t = (qp1 * s.e2 - qp2 * s.e1) / denom;
                    const double u = (qp1 * r.e2 - qp2 * r.e1) / denom;
                    if (t < 0.0 || t > 1.0 || u < 0.0 || u > 1.0) continue;
                    const Point2 hit{p.e1 + t * r.e1, p.e2 + t * r.e2};
                    const double scale = std::hypot(r.e1, r.e2) + std::hypot(s.e1, s.e2);
                    bool dup = false;
                    for (const auto& hh : hits)
                        if (std::hypot(hh.e1 - hit.e1, hh.e2 - hit.e2) < 1e-3 * scale) dup = true;
                    if (!dup) hits.push_back(hit);
                }
        }
    return hits;
}

NewtonResult newton_solve_2d(const ResidualFunction& f, const ResidualFunction& g, Point2 seed,
                             const NewtonOptions& options) {
    NewtonResult res;
    Point2 p = seed;
    const double h = options.jacobian_step;
    for (int it = 1; it <= options.max_iterations; ++it) {
        const double f0 = f(p.e1, p.e2), g0 = g(p.e1, p.e2);
        res.residual = std::max(std::abs(f0), std::abs(g0));
        res.iterations = it - 1;
        if (!std::isfinite(res.residual)) break;
        if (res.residual < options.residual_tolerance) {
            res.converged = true;
            break;
        }
        const double j11 = (f(p.e1 + h, p.e2) - f(p.e1 - h, p.e2)) / (2 * h);
        const double j12 = (f(p.e1, p.e2 + h) - f(p.e1, p.e2 - h)) / (2 * h);
        const double j21 = (g(p.e1 + h, p.e2) - g(p.e1 - h, p.e2)) / (2 * h);
        const double j22 = (g(p.e1, p.e2 + h) - g(p.e1, p.e2 - h)) / (2 * h);
        const double det = j11 * j22 - j12 * j21;
        if (det == 0.0 || !std::isfinite(det)) break;
        const double d1 = (j22 * f0 - j12 * g0) / det;
        const double d2 = (-j21 * f0 + j11 * g0) / det;
        p.e1 -= d1;
        p.e2 -= d2;
        res.iterations = it;
        if (std::hypot(d1, d2) < options.step_tolerance) {
            res.residual = std::max(std::abs(f(p.e1, p.e2)), std::abs(g(p.e1, p.e2)));
            res.converged = std::isfinite(res.residual);
            break;
        }
    }
    res.point = p;
    return res;
}

double TailoringSolution::residual(Condition c) const {
    for (const auto& [cond, v] : residuals)
        if (cond == c) return v;
    throw PreconditionError("solution has no residual for " + std::string(condition_name(c)));
}

std::string TailoringSolution::to_json() const {
    nlohmann::json j;
    j["family"] = std::string(family_name(codeword.family));
    if (codeword.system) j["system"] = codeword.system->name;
    j["field_tesla"] = codeword.field.z;
    j["eps1_rad"] = eps1;
    j["eps2_rad"] = eps2;
    j["converged"] = converged;
    j["iterations"] = iterations;
    nlohmann::json t = nlohmann::json::array();
    for (auto c : targets) t.push_back(std::string(condition_name(c)));
    j["targets"] = t;
    nlohmann::json r = nlohmann::json::object();
    for (const auto& [c, v] : residuals) r[std::string(condition_name(c))] = v;
    j["residuals"] = r;
    nlohmann::json roots_json = nlohmann::json::array();
    for (const auto& p : roots) roots_json.push_back({p.e1, p.e2});
    j["roots"] = roots_json;
    j["contour_intersections"] = intersections;
    j["search_half_width_rad"] = search_half_width;
    j["kl_max"] = kl_max;
    j["leftover_offdiag_IXIY"] = leftover;
    const double t0 = codeword.theta0;
    j["amplitudes"] = {std::cos(t0 + eps1), std::sin(t0 + eps1), std::cos(t0 + eps2), std::sin(t0 + eps2)};
    return j.dump();
}

namespace {

TailoringSolution solve_two_conditions(const TailoringProblem& prob, Condition c1, Condition c2,
                                       const TailorOptions& options) {
    const ResidualFunction f = prob.residual(c1);
    const ResidualFunction g = prob.residual(c2);

    std::vector<Point2> seeds;
    double half = options.half_width;
    std::size_t crossings = 0;
    while (true) {
        const Box box = Box::square(half);
        const double step = 2.0 * half / options.grid_cells;
        try {
            seeds = contour_intersections(trace_zero_contour(f, box, step), trace_zero_contour(g, box, step));
        } catch (const EmptyContourError&) {
            seeds.clear();
        }
        crossings = seeds.size();
        if (!seeds.empty() || 2.0 * half > options.max_half_width + 1e-15) break;
        half *= 2.0;
    }
    if (seeds.empty()) seeds.push_back({0.0, 0.0});

    std::vector<Point2> roots;
    int iterations = 0;
    for (const Point2& s : seeds) {
        const NewtonResult nr = newton_solve_2d(f, g, s, options.newton);
        if (!nr.converged || nr.residual > 1e-12) continue;
        bool dup = false;
        for (const auto& r : roots)
            if (std::hypot(r.e1 - nr.point.e1, r.e2 - nr.point.e2) < 1e-9) dup = true;
        if (!dup) {
            roots.push_back(nr.point);
            iterations = std::max(iterations, nr.iterations);
        }
    }
    if (roots.empty()) {
        throw NumericalError("tailoring of " + std::string(family_name(prob.family())) + " at " +
                             std::to_string(prob.field()) + " T did not converge from " +
                             std::to_string(seeds.size()) + " seed(s)");
    }
    std::stable_sort(roots.begin(), roots.end(),
                     [](const Point2& a, const Point2& b) { return std::hypot(a.e1, a.e2) < std::hypot(b.e1, b.e2); });

    TailoringSolution sol;
    sol.eps1 = roots.front().e1;
    sol.eps2 = roots.front().e2;
    sol.converged = true;
    sol.iterations = iterations;
    sol.targets = {c1, c2};
    sol.roots = roots;
    sol.intersections = crossings;
    sol.search_half_width = half;
    for (Condition c : kAllConditions) sol.residuals.emplace_back(c, std::abs(prob.signed_residual(c, sol.eps1, sol.eps2)));
    sol.codeword = prob.codeword(sol.eps1, sol.eps2);
    sol.leftover = std::abs(prob.raw(Condition::OffdiagIXIY, sol.eps1, sol.eps2));
    const KLReport kl = kl_residuals(sol.codeword, error_set_for(sol.codeword, ErrorSetKind::FirstOrderB));
    sol.kl_max = kl.max_residual;
    return sol;
}

std::size_t label_index(const KLReport& r, std::string_view label) {
    for (std::size_t i = 0; i < r.labels.size(); ++i)
        if (r.labels[i] == label) return i;
    throw PreconditionError("KL report has no label " + std::string(label));
}

}  // namespace

TailoringSolution solve_full_tailoring_92(const SpinSystem& sys, double b_tesla, const TailorOptions& options) {
    if (!(sys.nucleus == Spin{9})) throw PreconditionError("full tailoring needs a spin-9/2 nucleus");
    const TailoringProblem prob(CodeFamily::Tailored92, sys, b_tesla);
    TailoringSolution sol = solve_two_conditions(prob, Condition::DiagIZ, Condition::DiagIXIX, options);
    if (sol.kl_max > 1e-10) {
        throw NumericalError("tailored spin-9/2 code at " + std::to_string(b_tesla) +
                             " T fails KL verification: max residual " + std::to_string(sol.kl_max));
    }
    return sol;
}

TailoringSolution solve_partial_tailoring_72(const SpinSystem& sys, double b_tesla, const TailorOptions& options) {
    if (!(sys.nucleus == Spin{7})) throw PreconditionError("partial tailoring needs a spin-7/2 nucleus");
    const TailoringProblem prob(CodeFamily::Distorted72, sys, b_tesla);
    TailoringSolution sol = solve_two_conditions(prob, Condition::DiagIZ, Condition::OffdiagIXIX, options);
    const KLReport kl = kl_residuals(sol.codeword, error_set_for(sol.codeword, ErrorSetKind::FirstOrderB));
    const double iz = kl.diagdiff(label_index(kl, "1"), label_index(kl, "Z"));
    const double ixix = kl.offdiag(label_index(kl, "X"), label_index(kl, "X"));
    if (iz > 1e-10 || ixix > 1e-10) {
        throw NumericalError("partially tailored spin-7/2 code at " + std::to_string(b_tesla) +
                             " T fails verification (diag-IZ " + std::to_string(iz) + ", offdiag-IXIX " +
                             std::to_string(ixix) + ")");
    }
    return sol;
}

TailoringSolution solve_tailoring(CodeFamily family, const SpinSystem& sys, double b_tesla,
                                  const TailorOptions& options) {
    switch (family) {
        case CodeFamily::Ideal92:
        case CodeFamily::Tailored92:
            return solve_full_tailoring_92(sys, b_tesla, options);
        case CodeFamily::Ideal72:
        case CodeFamily::Distorted72:
            return solve_partial_tailoring_72(sys, b_tesla, options);
        default:
            throw PreconditionError(std::string(family_name(family)) + " has no tailoring problem");
    }
}

std::vector<SweepRow> field_sweep_tailoring(const SpinSystem& sys, const std::vector<double>& fields,
                                            const SweepConfig& config) {
    double e1 = config.eps1, e2 = config.eps2;
    if (config.mode == SweepMode::Frozen) {
        const TailoringSolution sol = solve_tailoring(config.family, sys, config.freeze_at, config.options);
        e1 = sol.eps1;
        e2 = sol.eps2;
    }
    std::vector<SweepRow> rows(fields.size());
    detail::parallel_for(fields.size(), config.threads, [&](std::size_t k) {
        SweepRow& row = rows[k];
        row.b_tesla = fields[k];
        row.residuals.assign(std::size(kAllConditions), NAN);
        try {
            double a = e1, b = e2;
            if (config.mode == SweepMode::Resolve) {
                const TailoringSolution sol = solve_tailoring(config.family, sys, fields[k], config.options);
                a = sol.eps1;
                b = sol.eps2;
            }
            const TailoringProblem prob(config.family, sys, fields[k]);
            row.eps1 = a;
            row.eps2 = b;
            for (std::size_t c = 0; c < std::size(kAllConditions); ++c) {
                row.residuals[c] = std::abs(prob.raw(kAllConditions[c], a, b));
            }
            const CodeWord cw = prob.codeword(a, b);
            row.kl_max = kl_residuals(cw, error_set_for(cw, ErrorSetKind::FirstOrderB)).max_residual;
            row.converged = true;
        } catch (const Error& e) {
            row.converged = false;
            row.error = e.what();
        }
    });
    return rows;
}

std::string sweep_to_csv(const std::vector<SweepRow>& rows, std::string_view description) {
    std::string out = "# " + std::string(description) + "\n";
    out += "B_tesla,eps1_rad,eps2_rad";
    for (Condition c : kAllConditions) out += "," + std::string(condition_name(c));
    out += ",kl_max,converged,status\n";
    for (const auto& r : rows) {
        out += detail::fmt(r.b_tesla) + "," + detail::fmt(r.eps1) + "," + detail::fmt(r.eps2);
        for (double v : r.residuals) out += "," + detail::fmt(v);
        out += "," + detail::fmt(r.kl_max) + "," + (r.converged ? "1" : "0") + ",";
        if (r.error.empty()) {
            out += "ok";
        } else {
            std::string msg = r.error;
            std::replace(msg.begin(), msg.end(), ',', ';');
            std::replace(msg.begin(), msg.end(), '\n', ' ');
            out += "\"" + msg + "\"";
        }
        out += "\n";
    }
    return out;
}

}  // namespace spinqec

#include "lspline/problem.hpp"

#include <json.hpp>

#include <charconv>
#include <cmath>
#include <fstream>
#include <sstream>

namespace lspline {

using nlohmann::ordered_json;

namespace {

void reject_unknown_keys(const ordered_json& obj, std::initializer_list<const char*> allowed,
                         const std::string& where) {
    for (const auto& item : obj.items()) {
        bool known = false;
        for (const char* k : allowed)
            if (item.key() == k) {
                known = true;
                break;
            }
        if (!known) throw ParseError("problem: unknown key \"" + item.key() + "\" in " + where);
    }
}

PhiChoice parse_phi(const ordered_json& j, const std::string& where) {
    PhiChoice phi;
    if (j.is_string()) {
        const std::string s = j.get<std::string>();
        if (s == "hermite-gaussian") {
            phi.kind = PhiChoice::Kind::HermiteGaussian;
        } else if (s == "delta") {
            phi.kind = PhiChoice::Kind::DeltaBoundary;
        } else {
            throw ParseError("problem: unsupported phi \"" + s + "\" in " + where);
        }
        return phi;
    }
    if (j.is_object()) {
        reject_unknown_keys(j, {"samples", "hermite-shift"}, where);
        if (j.contains("samples")) {
            phi.kind = PhiChoice::Kind::Samples;
            phi.samples_path = j.at("samples").get<std::string>();
            return phi;
        }
        if (j.contains("hermite-shift")) {
            phi.kind = PhiChoice::Kind::HermiteGaussian;
            phi.shift = j.at("hermite-shift").get<double>();
            return phi;
        }
    }
    throw ParseError("problem: malformed phi in " + where);
}

std::vector<GridFunction> load_phi_samples(const std::string& path, const Grid& g, int count) {
    std::ifstream in(path);
    if (!in) throw ParseError("phi samples: cannot open " + path);
    std::string line;
    if (!std::getline(in, line)) throw ParseError("phi samples: empty file " + path);
    std::vector<std::vector<double>> cols(static_cast<std::size_t>(count));
    for (auto& c : cols) c.reserve(g.n);
    std::size_t row = 0;
    while (std::getline(in, line)) {
        if (line.empty()) continue;
        std::stringstream ss(line);
        std::string cell;
        std::vector<double> vals;
        while (std::getline(ss, cell, ',')) vals.push_back(std::stod(cell));
        if (vals.size() != static_cast<std::size_t>(count) + 1)
            throw ParseError("phi samples: expected " + std::to_string(count + 1) +
                             " columns per row in " + path);
        if (row >= g.n) throw ParseError("phi samples: more rows than grid nodes in " + path);
        if (std::abs(vals[0] - g.node(row)) > 1e-9)
            throw ParseError("phi samples: x column must match the problem grid in " + path);
        for (int c = 0; c < count; ++c) cols[static_cast<std::size_t>(c)].push_back(vals[c + 1]);
        ++row;
    }
    if (row != g.n) throw ParseError("phi samples: row count does not match the grid in " + path);
    std::vector<GridFunction> phis;
    for (auto& c : cols) phis.push_back(GridFunction::from_samples(g, std::move(c)));
    return phis;
}

ordered_json report_to_json(const Report& r) {
    ordered_json j;
    j["title"] = r.title;
    ordered_json items = ordered_json::array();
    for (const auto& it : r.items) {
        ordered_json row;
        row["name"] = it.name;
        row["value"] = it.value;
        row["threshold"] = it.threshold;
        row["pass"] = it.pass;
        items.push_back(row);
    }
    j["items"] = items;
    j["passed"] = r.passed();
    return j;
}

}  // namespace

std::string format_double(double v) {
    char buf[64];
    const auto res = std::to_chars(buf, buf + sizeof(buf), v);
    return std::string(buf, res.ptr);
}

ProblemFile parse_problem_text(const std::string& text) {
    ordered_json j;
    try {
        j = ordered_json::parse(text);
    } catch (const std::exception& e) {
        throw ParseError(std::string("problem: invalid JSON: ") + e.what());
    }
    try {
        reject_unknown_keys(
            j, {"version", "operator", "space", "phi", "phi_alt", "data", "grid", "solver"},
            "problem");
        ProblemFile pf;
        pf.version = j.at("version").get<int>();
        if (pf.version != 1) throw ParseError("problem: unsupported version");

        const auto& op = j.at("operator");
        reject_unknown_keys(op, {"type", "order"}, "operator");
        if (op.at("type").get<std::string>() != "derivative")
            throw ParseError("problem: operator type must be \"derivative\"");
        pf.order = op.at("order").get<int>();

        const auto& space = j.at("space");
        if (space.is_string()) {
            const std::string s = space.get<std::string>();
            if (s == "L2")
                pf.norm = PrimaryNorm::L2;
            else if (s == "M")
                pf.norm = PrimaryNorm::TotalVariation;
            else
                throw ParseError("problem: unsupported space \"" + s + "\"");
        } else if (space.is_object()) {
            reject_unknown_keys(space, {"Lp"}, "space");
            pf.norm = PrimaryNorm::Lp;
            pf.p = space.at("Lp").get<double>();
        } else {
            throw ParseError("problem: malformed space");
        }

        if (j.contains("phi")) pf.phi = parse_phi(j.at("phi"), "phi");
        if (j.contains("phi_alt")) pf.phi_alt = parse_phi(j.at("phi_alt"), "phi_alt");

        if (j.contains("data")) {
            DataSet d;
            for (const auto& pair : j.at("data")) {
                if (!pair.is_array() || pair.size() != 2)
                    throw ParseError("problem: data entries must be [x, y] pairs");
                d.x.push_back(pair[0].get<double>());
                d.y.push_back(pair[1].get<double>());
            }
            d.validate();
            pf.data = std::move(d);
        }

        if (j.contains("grid")) {
            const auto& g = j.at("grid");
            reject_unknown_keys(g, {"xmin", "xmax", "n"}, "grid");
            pf.grid = Grid::uniform(g.at("xmin").get<double>(), g.at("xmax").get<double>(),
                                    g.at("n").get<std::size_t>());
        }

        if (j.contains("solver")) {
            const auto& s = j.at("solver");
            reject_unknown_keys(
                s, {"tolerance", "iteration_cap", "knot_density", "knot_margin", "seed"}, "solver");
            if (s.contains("tolerance")) pf.tolerance = s.at("tolerance").get<double>();
            if (s.contains("iteration_cap")) pf.solver.max_pivots = s.at("iteration_cap").get<int>();
            if (s.contains("knot_density")) pf.solver.knots_per_site = s.at("knot_density").get<int>();
            if (s.contains("knot_margin")) pf.solver.knot_margin = s.at("knot_margin").get<double>();
            if (s.contains("seed")) pf.solver.seed = s.at("seed").get<std::uint64_t>();
        }
        return pf;
    } catch (const ParseError&) {
        throw;
    } catch (const std::invalid_argument& e) {
        throw ParseError(std::string("problem: ") + e.what());
    } catch (const std::exception& e) {
        throw ParseError(std::string("problem: schema error: ") + e.what());
    }
}

ProblemFile parse_problem(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ParseError("problem: cannot open " + path);
    std::stringstream ss;
    ss << in.rdbuf();
    return parse_problem_text(ss.str());
}

void apply_overrides(ProblemFile& pf, const ProblemOverrides& ov) {
    if (ov.grid_t) pf.grid = Grid::uniform(-*ov.grid_t, *ov.grid_t, pf.grid.n);
    if (ov.grid_n) pf.grid = Grid::uniform(pf.grid.x_min, pf.grid.x_max, *ov.grid_n);
    if (ov.tolerance) pf.tolerance = *ov.tolerance;
}

BiorthoSystem build_system(const ProblemFile& pf, const PhiChoice& phi) {
    switch (phi.kind) {
        case PhiChoice::Kind::HermiteGaussian: {
            if (phi.shift == 0.0) return hermite_gaussian_system(pf.grid, pf.order);
            BiorthoSystem base = hermite_gaussian_system(pf.grid, pf.order);
            auto [sys, cob] =
                change_of_basis(base, hermite_gaussian_phis(pf.grid, pf.order, phi.shift),
                                pf.tolerance);
            (void)cob;
            return sys;
        }
        case PhiChoice::Kind::DeltaBoundary:
            return delta_boundary_system(pf.grid, pf.order);
        case PhiChoice::Kind::Samples: {
            std::vector<GridFunction> phis = load_phi_samples(phi.samples_path, pf.grid, pf.order);
            std::vector<GridFunction> ps;
            for (int n = 0; n < pf.order; ++n) {
                std::vector<double> mono(static_cast<std::size_t>(n) + 1, 0.0);
                mono.back() = 1.0;
                ps.push_back(GridFunction::polynomial(pf.grid, std::move(mono)));
            }
            return make_biortho_system(std::move(phis), std::move(ps), pf.tolerance);
        }
    }
    throw std::logic_error("build_system: unreachable");
}

NativeSpaceSpec build_spec(const ProblemFile& pf) {
    return make_native_spec(make_derivative_operator(pf.order), build_system(pf, pf.phi), pf.norm,
                            pf.p);
}

bool RunReport::passed() const {
    if (exit_code != kExitOk) return false;
    for (const auto& r : checks)
        if (!r.passed()) return false;
    return true;
}

std::string RunReport::to_json() const {
    ordered_json j;
    j["version"] = kLibraryVersion;
    j["command"] = command;
    ordered_json prov;
    prov["grid"] = {{"xmin", grid.x_min}, {"xmax", grid.x_max}, {"n", grid.n}};
    prov["truncation_radius"] = std::max(std::abs(grid.x_min), std::abs(grid.x_max));
    prov["tolerance"] = tolerance;
    prov["seed"] = seed;
    if (trials > 0) prov["trials"] = trials;
    j["provenance"] = prov;
    if (norms) {
        j["norms"] = {{"native_norm", norms->value},
                      {"operator_part", norms->operator_part},
                      {"nullspace_part", norms->nullspace_part}};
    }
    if (solution) {
        ordered_json s;
        s["kind"] = (solution->kind == SolutionKind::Kernel) ? "kernel" : "sparse-spline";
        s["knots"] = solution->knots;
        s["weights"] = solution->weights;
        std::vector<double> b(solution->null_coeffs.data(),
                              solution->null_coeffs.data() + solution->null_coeffs.size());
        s["null_coeffs"] = b;
        s["objective"] = solution->objective;
        s["residual"] = solution->residual;
        j["solution"] = s;
    }
    ordered_json cs = ordered_json::array();
    for (const auto& r : checks) cs.push_back(report_to_json(r));
    j["checks"] = cs;
    j["status"] = passed() ? "pass" : "fail";
    j["exit_code"] = exit_code;
    if (!message.empty()) j["message"] = message;
    return j.dump(2) + "\n";
}

namespace {

RunReport make_base_report(const ProblemFile& pf, const std::string& command) {
    RunReport rep;
    rep.command = command;
    rep.grid = pf.grid;
    rep.tolerance = pf.tolerance;
    rep.seed = pf.solver.seed;
    return rep;
}

std::vector<double> default_check_points(int order) {
    const int count = std::max(order + 1, 5);
    std::vector<double> pts(static_cast<std::size_t>(count));
    for (int i = 0; i < count; ++i)
        pts[static_cast<std::size_t>(i)] = -2.0 + 4.0 * i / (count - 1);
    return pts;
}

}  // namespace

RunReport cmd_check(const ProblemFile& pf) {
    RunReport rep = make_base_report(pf, "check");
    try {
        const OperatorDescriptor op = make_derivative_operator(pf.order);
        rep.checks.push_back(admissibility_check(op, default_test_bank(pf.grid)));

        Report bio;
        bio.title = "biorthogonality";
        try {
            const NativeSpaceSpec spec = build_spec(pf);
            const double dev =
                (spec.sys.gram - Eigen::MatrixXd::Identity(spec.sys.size(), spec.sys.size()))
                    .cwiseAbs()
                    .maxCoeff();
            bio.add("gram_identity_deviation", dev, pf.tolerance);
        } catch (const BiorthoError& e) {
            bio.add("gram_identity_deviation",
                    (e.gram() - Eigen::MatrixXd::Identity(e.gram().rows(), e.gram().cols()))
                        .cwiseAbs()
                        .maxCoeff(),
                    pf.tolerance);
            rep.message = e.what();
        } catch (const std::invalid_argument& e) {
            bio.items.push_back({"space_compatibility", 1.0, 0.0, false});
            rep.message = e.what();
        }
        rep.checks.push_back(bio);

        const std::vector<double> points = (pf.data && pf.data->size() > 0)
                                               ? pf.data->x
                                               : default_check_points(pf.order);
        rep.checks.push_back(conditional_positivity_check(op, points, 500, pf.solver.seed));

        rep.exit_code = rep.passed() ? kExitOk : kExitFailure;
    } catch (const std::exception& e) {
        rep.exit_code = kExitFailure;
        rep.message = e.what();
    }
    return rep;
}

RunReport cmd_solve(const ProblemFile& pf, const std::string& out_csv, const std::string& out_json) {
    RunReport rep = make_base_report(pf, "solve");
    try {
        if (!pf.data || pf.data->size() == 0) throw SolverError("solve: problem file has no data");
        const OperatorDescriptor op = make_derivative_operator(pf.order);
        const DataSet& data = *pf.data;

        Solution sol;
        if (pf.norm == PrimaryNorm::TotalVariation) {
            sol = solve_gtv(op, data, default_knot_grid(data, pf.solver), pf.solver);
        } else if (pf.norm == PrimaryNorm::L2 || (pf.norm == PrimaryNorm::Lp && pf.p == 2.0)) {
            sol = solve_l2(op, data);
        } else {
            throw SolverError("solve: no solver for Lp with p != 2");
        }
        rep.solution = sol;

        // the solution as a closed-form grid function (kernel atoms are Green
        // atoms of order 2m with the adjoint sign)
        std::vector<FormTerm> terms;
        const double ksign = (op.order % 2 == 0) ? 1.0 : -1.0;
        for (std::size_t k = 0; k < sol.knots.size(); ++k) {
            if (sol.kind == SolutionKind::Kernel)
                terms.push_back(GreenAtomForm{2 * op.order, sol.knots[k], ksign * sol.weights[k]});
            else
                terms.push_back(GreenAtomForm{op.order, sol.knots[k], sol.weights[k]});
        }
        std::vector<double> bcoeffs(sol.null_coeffs.data(),
                                    sol.null_coeffs.data() + sol.null_coeffs.size());
        terms.push_back(PolynomialForm{bcoeffs});
        const GridFunction f = GridFunction::closed_form(pf.grid, std::move(terms));

        const NativeSpaceSpec spec = build_spec(pf);
        rep.norms = native_norm(spec, f);

        Report rs;
        rs.title = "solution";
        rs.add("interpolation_residual", sol.residual, pf.solver.interp_tol);
        if (sol.kind == SolutionKind::SparseSpline) {
            rs.add("knot_count", static_cast<double>(sol.knots.size()),
                   static_cast<double>(data.size()) - op.order);
        }
        rep.checks.push_back(rs);
        rep.exit_code = rep.passed() ? kExitOk : kExitFailure;

        if (!out_csv.empty()) {
            std::vector<double> xs(pf.grid.n);
            for (std::size_t i = 0; i < pf.grid.n; ++i) xs[i] = pf.grid.node(i);
            std::vector<double> lf;
            if (sol.kind == SolutionKind::Kernel) {
                lf = evaluate_solution_lf(sol, op, xs);
            } else {
                // measure-valued L f: emit the m-th finite difference, knots
                // appear as stencil-width spikes
                lf = fd_derivative(f, op.order).samples();
            }
            std::ofstream csv(out_csv);
            if (!csv) throw SolverError("solve: cannot write " + out_csv);
            csv << "x,f,Lf\n";
            for (std::size_t i = 0; i < xs.size(); ++i)
                csv << format_double(xs[i]) << ',' << format_double(f.sample(i)) << ','
                    << format_double(lf[i]) << '\n';
        }
    } catch (const std::exception& e) {
        rep.exit_code = kExitFailure;
        rep.message = e.what();
    }
    if (!out_json.empty()) {
        std::ofstream js(out_json);
        if (js) js << rep.to_json();
    }
    return rep;
}

namespace {

// projector algebra, norm axioms, decomposition, and the (max, sum) duality
// pairing, measured over randomized trials
Report module_invariants(const NativeSpaceSpec& spec, int trials, std::uint64_t seed) {
    const Grid& g = spec.sys.phis.front().grid();
    std::mt19937_64 rng(seed ^ 0x9e3779b97f4a7c15ULL);
    std::uniform_real_distribution<double> unit(-1.0, 1.0);
    std::uniform_real_distribution<double> center(-2.0, 2.0);

    double idem_np = 0.0, idem_nphi = 0.0, compl_ = 0.0, adj = 0.0;
    double homog = 0.0, triangle = 0.0, recon = 0.0, idem_dec = 0.0, dual = 0.0;

    auto sup_diff = [](const GridFunction& a, const GridFunction& b) {
        double m = 0.0;
        for (std::size_t i = 0; i < a.grid().n; ++i)
            m = std::max(m, std::abs(a.sample(i) - b.sample(i)));
        return m;
    };

    auto random_member = [&](std::mt19937_64& r) -> GridFunction {
        if (spec.norm == PrimaryNorm::TotalVariation) {
            std::vector<FormTerm> terms;
            for (int k = 0; k < 3; ++k)
                terms.push_back(GreenAtomForm{spec.op.order, center(r), unit(r)});
            PolynomialForm pol;
            for (int n = 0; n < spec.sys.size(); ++n)
                pol = add(pol, scale(spec.sys.ps[n].polynomial_form(), unit(r)));
            terms.push_back(pol);
            return GridFunction::closed_form(g, std::move(terms));
        }
        return random_mixture(r).sampled(g);
    };

    for (int t = 0; t < trials; ++t) {
        const GridFunction f = random_mixture(rng).sampled(g);
        const GridFunction h = random_mixture(rng).sampled(g);

        const GridFunction pf_ = project_nullspace(spec.sys, f);
        idem_np = std::max(idem_np, sup_diff(project_nullspace(spec.sys, pf_), pf_));
        const GridFunction ph = project_analysis_span(spec.sys, h);
        idem_nphi = std::max(idem_nphi, sup_diff(project_analysis_span(spec.sys, ph), ph));
        compl_ = std::max(compl_, weighted_sup_norm(project_analysis_span(spec.sys, h - ph),
                                                    WeightSpec{0.0}));
        adj = std::max(adj, std::abs(inner(pf_, h) - inner(f, ph)));

        // norm axioms on the computed native norm
        const GridFunction u = random_member(rng);
        const GridFunction v = random_member(rng);
        const double c = 2.0 * unit(rng);
        const double nu = native_norm(spec, u).value;
        const double nv = native_norm(spec, v).value;
        const double ncu = native_norm(spec, u * c).value;
        homog = std::max(homog, std::abs(ncu - std::abs(c) * nu) / (1.0 + std::abs(c) * nu));
        const double nsum = native_norm(spec, u + v).value;
        triangle = std::max(triangle, std::max(0.0, nsum - nu - nv) / (1.0 + nu + nv));

        // unique decomposition and its idempotence
        const Decomposition d = decompose(spec, f);
        const GridFunction rec = reconstruct(spec, d);
        const std::size_t margin = 5 * static_cast<std::size_t>(spec.op.order);
        double rsup = 0.0;
        for (std::size_t i = margin; i + margin < g.n; ++i)
            rsup = std::max(rsup, std::abs(rec.sample(i) - f.sample(i)));
        recon = std::max(recon, rsup);
        const Decomposition d2 = decompose(spec, rec);
        idem_dec = std::max(idem_dec, (d2.p_coeffs - d.p_coeffs).cwiseAbs().maxCoeff());

        // duality of the composite pairing: the sup of <f, g> over the unit
        // ball of the null-space block of the pre-dual norm equals ||phi(f)||_2
        Eigen::VectorXd cf = analysis_coefficients(spec.sys, f);
        if (cf.norm() > 1e-9) {
            const Eigen::VectorXd cstar = cf / cf.norm();
            GridFunction gstar = GridFunction::zero(g);
            for (int n = 0; n < spec.sys.size(); ++n) gstar += cstar(n) * spec.sys.phis[n];
            dual = std::max(dual, std::abs(inner(f, gstar) - cf.norm()) / (1.0 + cf.norm()));
        }
    }

    Report rep;
    rep.title = "module invariants";
    rep.add("proj_nullspace_idempotence", idem_np, 1e-8);
    rep.add("proj_analysis_idempotence", idem_nphi, 1e-8);
    rep.add("proj_complementarity", compl_, 1e-8);
    rep.add("projector_adjointness", adj, 1e-6);
    rep.add("native_norm_homogeneity", homog, 1e-8);
    rep.add("native_norm_triangle", triangle, 1e-8);
    rep.add("decomposition_reconstruction", recon, 1e-5);
    rep.add("decomposition_idempotence", idem_dec, 1e-8);
    rep.add("composite_duality_pairing", dual, 1e-8);
    return rep;
}

Report equivalence_checks(const ProblemFile& pf, const NativeSpaceSpec& spec,
                          const PhiChoice& alt, std::uint64_t seed) {
    Report rep;
    rep.title = "norm equivalence";

    std::vector<GridFunction> new_phis;
    switch (alt.kind) {
        case PhiChoice::Kind::HermiteGaussian:
            new_phis = hermite_gaussian_phis(pf.grid, pf.order, alt.shift);
            break;
        case PhiChoice::Kind::Samples: {
            const BiorthoSystem tmp = build_system(pf, alt);
            new_phis = tmp.phis;
            break;
        }
        case PhiChoice::Kind::DeltaBoundary:
            throw std::invalid_argument("suite: phi_alt must be sampled");
    }

    auto [sys_b, cob] = change_of_basis(spec.sys, new_phis, pf.tolerance);
    const NativeSpaceSpec spec_b = make_native_spec(spec.op, sys_b, spec.norm, spec.p);

    std::mt19937_64 rng(seed + 17);
    std::uniform_real_distribution<double> unit(-1.0, 1.0);
    std::uniform_real_distribution<double> center(-2.0, 2.0);

    // coefficient-norm bounds B1, B2 over random null-space elements
    double bviol = 0.0;
    for (int t = 0; t < 100; ++t) {
        PolynomialForm pol;
        for (int n = 0; n < spec.sys.size(); ++n)
            pol = add(pol, scale(spec.sys.ps[n].polynomial_form(), unit(rng)));
        const GridFunction p = GridFunction::polynomial(pf.grid, pol.coeffs);
        const double base = analysis_coefficients(spec.sys, p).norm();
        const double tilde = analysis_coefficients(sys_b, p).norm();
        if (base > 1e-12) {
            const double r = tilde / base;
            bviol = std::max({bviol, cob.B1 - r, r - cob.B2});
        }
    }
    rep.add("coefficient_norm_bounds", bviol, 1e-9 * std::max(1.0, cob.B2));

    // the re-based family spans the same null space
    double span = 0.0;
    for (const auto& pb : sys_b.ps) {
        const GridFunction res = pb - project_nullspace(spec.sys, pb);
        span = std::max(span, weighted_sup_norm(res, WeightSpec{spec.op.alpha}));
    }
    rep.add("basis_span_invariance", span, 1e-8);

    // native-norm equivalence with the estimated (A1, A2)
    const auto [a1, a2] = norm_equivalence_constants(spec, spec_b);
    double aviol = 0.0, part1 = 0.0;
    for (int t = 0; t < 50; ++t) {
        GridFunction f = GridFunction::zero(pf.grid);
        if (spec.norm == PrimaryNorm::TotalVariation) {
            std::vector<FormTerm> terms;
            for (int k = 0; k < 3; ++k)
                terms.push_back(GreenAtomForm{spec.op.order, center(rng), unit(rng)});
            PolynomialForm pol;
            for (int n = 0; n < spec.sys.size(); ++n)
                pol = add(pol, scale(spec.sys.ps[n].polynomial_form(), unit(rng)));
            terms.push_back(pol);
            f = GridFunction::closed_form(pf.grid, std::move(terms));
        } else {
            f = random_mixture(rng).sampled(pf.grid);
        }
        const NormBreakdown na = native_norm(spec, f);
        const NormBreakdown nb = native_norm(spec_b, f);
        if (na.value > 1e-12) {
            const double r = nb.value / na.value;
            aviol = std::max({aviol, a1 - r, r - a2});
        }
        part1 = std::max(part1, std::abs(na.operator_part - nb.operator_part));
    }
    rep.add("native_norm_equivalence", aviol, 0.0);
    rep.add("operator_part_system_independence", part1, 0.0);
    return rep;
}

}  // namespace

RunReport cmd_suite(const ProblemFile& pf, int trials, std::uint64_t seed) {
    RunReport rep = make_base_report(pf, "suite");
    rep.seed = seed;
    rep.trials = trials;
    if (trials < 1) {
        rep.exit_code = kExitUsage;
        rep.message = "suite: trials must be positive";
        return rep;
    }
    if (pf.phi.kind == PhiChoice::Kind::DeltaBoundary) {
        rep.exit_code = kExitUsage;
        rep.message = "suite: requires sampled phi (delta functionals have no grid image)";
        return rep;
    }
    try {
        const NativeSpaceSpec spec = build_spec(pf);
        Report bio;
        bio.title = "biorthogonality";
        bio.add("gram_identity_deviation",
                (spec.sys.gram - Eigen::MatrixXd::Identity(spec.sys.size(), spec.sys.size()))
                    .cwiseAbs()
                    .maxCoeff(),
                pf.tolerance);
        rep.checks.push_back(bio);
        rep.checks.push_back(identity_suite(spec, trials, seed));
        rep.checks.push_back(module_invariants(spec, trials, seed));
        if (pf.phi_alt) rep.checks.push_back(equivalence_checks(pf, spec, *pf.phi_alt, seed));
        rep.exit_code = rep.passed() ? kExitOk : kExitFailure;
    } catch (const BiorthoError& e) {
        Report bio;
        bio.title = "biorthogonality";
        bio.add("gram_identity_deviation",
                (e.gram() - Eigen::MatrixXd::Identity(e.gram().rows(), e.gram().cols()))
                    .cwiseAbs()
                    .maxCoeff(),
                pf.tolerance);
        rep.checks.push_back(bio);
        rep.exit_code = kExitFailure;
        rep.message = e.what();
    } catch (const std::exception& e) {
        rep.exit_code = kExitFailure;
        rep.message = e.what();
    }
    return rep;
}

}  // namespace lspline

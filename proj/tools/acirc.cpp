// acirc: file-in/file-out front end for the circuit toolkit. Exit codes:
// 0 success (and Zero verdicts), 1 NonZero verdicts / failed verification,
// 2 domain errors, 64 usage errors.

#include <fstream>
#include <iostream>
#include <sstream>

#include "CLI11.hpp"

#include "acirc/abp.hpp"
#include "acirc/artifact.hpp"
#include "acirc/circuit.hpp"
#include "acirc/det.hpp"
#include "acirc/families.hpp"
#include "acirc/perm.hpp"
#include "acirc/pit.hpp"
#include "acirc/transforms.hpp"

using namespace acirc;

namespace {

std::string slurp(const std::string& path) {
    std::ifstream in(path);
    if (!in.good()) fail(Errc::Usage, "cannot read " + path);
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

void emit(const std::string& out_path, const std::string& content) {
    if (out_path.empty() || out_path == "-") {
        std::cout << content;
        return;
    }
    std::ofstream out(out_path);
    if (!out.good()) fail(Errc::Usage, "cannot write " + out_path);
    out << content;
}

Field parse_field_flag(const std::string& s) {
    if (s == "Q") return Field::rationals();
    if (s.rfind("Fp:", 0) == 0) return Field::prime(std::stoull(s.substr(3)));
    fail(Errc::Usage, "--field takes Q or Fp:<prime>");
}

std::map<std::string, Fe> parse_assignments(const std::string& s, const Field& f) {
    std::map<std::string, Fe> pt;
    std::istringstream in(s);
    std::string item;
    while (std::getline(in, item, ',')) {
        auto eq = item.find('=');
        if (eq == std::string::npos) fail(Errc::Usage, "assignments look like x=2,y=1/3");
        pt[item.substr(0, eq)] = f.parse_literal(item.substr(eq + 1));
    }
    return pt;
}

std::string verdict_block(const PitVerdict& v) {
    std::ostringstream out;
    out << "verdict " << (v.zero ? "zero" : "nonzero") << "\n";
    out << "error-bound " << v.error_bound.get_str() << "\n";
    if (v.witness) {
        out << "witness";
        for (const auto& [var, val] : *v.witness) out << ' ' << var << '=' << val.str();
        out << "\n";
    }
    return out.str();
}

/// The input may be a circuit or an ABP file; circuits go through the
/// weakly-skew conversion.
Abp load_abp(const std::string& path) {
    std::string text = slurp(path);
    std::istringstream probe(text);
    std::string first;
    probe >> first;
    while (first == "#") {
        std::string rest;
        std::getline(probe, rest);
        probe >> first;
    }
    if (first == "abp") return parse_abp(text);
    return weakly_skew_to_abp(parse_circuit(text));
}

int run(int argc, char** argv) {
    CLI::App app{"exact arithmetic-circuit toolkit"};
    app.require_subcommand(1);
    app.fallthrough(); // global flags may follow the subcommand

    std::string out_path;
    std::uint64_t seed = 0;
    std::size_t budget_terms = 1000000;
    std::string field_flag = "Q";
    app.add_option("--seed", seed, "seed for randomized commands");
    app.add_option("--budget-terms", budget_terms, "term budget for symbolic expansion");
    app.add_option("--field", field_flag, "field for generators: Q or Fp:<prime>");
    app.add_option("-o,--output", out_path, "output file (default stdout)");
    ExpandOptions opts;

    // stats
    std::string stats_file;
    auto* stats = app.add_subcommand("stats", "metrics and structure flags of a circuit");
    stats->add_option("circuit", stats_file)->required();

    // expand
    std::string expand_file, expand_gate;
    auto* expandc = app.add_subcommand("expand", "oracle expansion to a polynomial file");
    expandc->add_option("circuit", expand_file)->required();
    expandc->add_option("--gate", expand_gate, "expand at a named gate");

    // transform
    std::string tname, tfile, report_path;
    std::uint64_t homog_d = 0;
    auto* transform = app.add_subcommand("transform", "homogenize | md | balance");
    transform->add_option("kind", tname)->required()->check(CLI::IsMember({"homogenize", "md", "balance"}));
    transform->add_option("circuit", tfile)->required();
    transform->add_option("-d,--degree", homog_d, "degree bound for homogenize");
    transform->add_option("--report", report_path, "write the transform report here");

    // to-abp / to-skew
    std::string toabp_file, toskew_file;
    auto* toabp = app.add_subcommand("to-abp", "weakly-skew circuit -> branching program");
    toabp->add_option("circuit", toabp_file)->required();
    auto* toskew = app.add_subcommand("to-skew", "branching program -> skew circuit");
    toskew->add_option("abp", toskew_file)->required();

    // reduce det/per
    std::string reduce_kind, reduce_file, sum_vars_flag;
    std::size_t per_bound = 0;
    auto* reduce = app.add_subcommand("reduce", "determinant / permanent projections");
    reduce->add_option("kind", reduce_kind)->required()->check(CLI::IsMember({"det", "per"}));
    reduce->add_option("input", reduce_file)->required();
    reduce->add_option("--sum", sum_vars_flag, "comma-separated summed variables (per)");
    reduce->add_option("--bound", per_bound, "declared size bound s (per)");

    // eval
    std::string eval_file, eval_at;
    auto* evalc = app.add_subcommand("eval", "evaluate a circuit at a point");
    evalc->add_option("circuit", eval_file)->required();
    evalc->add_option("--at", eval_at, "x=2,y=1/3")->required();

    // pit
    std::string pit_a, pit_b;
    int pit_trials = 20;
    auto* pit = app.add_subcommand("pit", "randomized equality of two circuits");
    pit->add_option("c1", pit_a)->required();
    pit->add_option("c2", pit_b)->required();
    pit->add_option("--trials", pit_trials);

    // grid
    std::string grid_file;
    std::uint64_t grid_d = 1;
    auto* grid = app.add_subcommand("grid", "deterministic grid zero test");
    grid->add_option("circuit", grid_file)->required();
    grid->add_option("-D,--degree", grid_d)->required();

    // equslp
    std::string slp_file;
    auto* slp = app.add_subcommand("equslp", "deterministic zero test, variable-free circuits");
    slp->add_option("circuit", slp_file)->required();

    // sdit
    std::string sdit_file;
    int sdit_trials = 20;
    auto* sditc = app.add_subcommand("sdit", "symbolic determinant identity test");
    sditc->add_option("input", sdit_file)->required();
    sditc->add_option("--trials", sdit_trials);

    // gen
    std::string gen_name;
    std::size_t gen_n = 0, gen_d = 0;
    auto* gen = app.add_subcommand("gen", "generate a named polynomial family");
    gen->add_option("family", gen_name)->required()
        ->check(CLI::IsMember({"det", "per", "hc", "imm", "esym", "cut", "trees"}));
    gen->add_option("n", gen_n)->required();
    gen->add_option("d", gen_d, "second parameter (imm depth / esym degree)");

    // verify
    std::string verify_file;
    auto* verify = app.add_subcommand("verify", "re-check a certified artifact");
    verify->add_option("artifact", verify_file)->required();

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return 64; // usage errors
    }
    opts.term_budget = budget_terms;

    if (*stats) {
        Circuit c = parse_circuit(slurp(stats_file));
        auto m = metrics(c);
        auto fl = classify(c);
        std::ostringstream out;
        out << "size " << m.size << "\ndepth " << m.depth << "\nformal-degree " << m.formal_degree
            << "\n";
        if (m.constant_free_size) out << "constant-free-size " << *m.constant_free_size << "\n";
        out << "outputs " << c.outputs().size() << "\n";
        out << "is-formula " << fl.is_formula << "\nis-skew " << fl.is_skew << "\nis-weakly-skew "
            << fl.is_weakly_skew << "\nis-mult-disjoint " << fl.is_mult_disjoint
            << "\nis-constant-free " << fl.is_constant_free << "\n";
        if (!fl.is_weakly_skew && !fl.weakly_skew_reason.empty())
            out << "weakly-skew-failure " << fl.weakly_skew_reason << "\n";
        emit(out_path, out.str());
    } else if (*expandc) {
        Circuit c = parse_circuit(slurp(expand_file));
        std::optional<GateId> gate;
        if (!expand_gate.empty()) {
            for (std::size_t g = 0; g < c.num_gates(); ++g)
                if (c.gate_name(static_cast<GateId>(g)) == expand_gate) gate = static_cast<GateId>(g);
            if (!gate) fail(Errc::UnknownGateRef, expand_gate);
        }
        emit(out_path, expand(c, gate, opts).str());
    } else if (*transform) {
        Circuit c = parse_circuit(slurp(tfile));
        TransformReport report;
        Circuit result(c.field(), c.vars());
        if (tname == "homogenize") {
            auto r = homogenize(c, homog_d ? homog_d : std::max<std::uint64_t>(1, metrics(c).formal_degree), opts);
            result = r.circuit;
            report = r.report;
        } else if (tname == "md") {
            auto r = make_mult_disjoint(c, opts);
            result = r.circuit;
            report = r.report;
        } else {
            auto r = balance_formula(c, opts);
            result = r.circuit;
            report = r.report;
        }
        emit(out_path, serialize_circuit(result));
        if (report_path.empty()) std::cerr << report.str();
        else emit(report_path, report.str());
    } else if (*toabp) {
        emit(out_path, serialize_abp(weakly_skew_to_abp(parse_circuit(slurp(toabp_file)))));
    } else if (*toskew) {
        emit(out_path, serialize_circuit(abp_to_skew_circuit(parse_abp(slurp(toskew_file)))));
    } else if (*reduce) {
        if (reduce_kind == "det") {
            Abp a = load_abp(reduce_file);
            ProjectionMatrix proj = abp_to_det_projection(a);
            try {
                attach_target(proj, abp_expand(a, opts));
            } catch (const Error& e) {
                if (e.code() != Errc::BudgetExceeded) throw;
            }
            emit(out_path, serialize_projection(proj));
        } else {
            Circuit g = parse_circuit(slurp(reduce_file));
            std::vector<std::string> summed;
            std::istringstream in(sum_vars_flag);
            std::string v;
            while (std::getline(in, v, ','))
                if (!v.empty()) summed.push_back(v);
            std::size_t bound = per_bound ? per_bound : g.size() + 1;
            auto res = valiant_sum_to_per(g, summed, bound);
            res.projection.source_circuit = serialize_circuit(g);
            res.projection.summed_vars = summed;
            try {
                attach_target(res.projection, exponential_sum(g, summed, opts));
            } catch (const Error& e) {
                if (e.code() != Errc::BudgetExceeded) throw;
            }
            emit(out_path, serialize_projection(res.projection));
        }
    } else if (*evalc) {
        Circuit c = parse_circuit(slurp(eval_file));
        auto pt = parse_assignments(eval_at, c.field());
        std::ostringstream out;
        for (const Fe& v : evaluate(c, pt)) out << v.str() << "\n";
        emit(out_path, out.str());
    } else if (*pit) {
        auto v = pit_random(parse_circuit(slurp(pit_a)), parse_circuit(slurp(pit_b)), pit_trials, seed);
        emit(out_path, verdict_block(v));
        return v.zero ? 0 : 1;
    } else if (*grid) {
        auto v = grid_zero_test(parse_circuit(slurp(grid_file)), grid_d);
        emit(out_path, verdict_block(v));
        return v.zero ? 0 : 1;
    } else if (*slp) {
        SlpVerdict v = equ_slp(parse_circuit(slurp(slp_file)));
        emit(out_path, std::string("verdict ") + (v == SlpVerdict::Zero ? "zero" : "nonzero") + "\n");
        return v == SlpVerdict::Zero ? 0 : 1;
    } else if (*sditc) {
        std::string text = slurp(sdit_file);
        std::istringstream probe(text);
        std::string first;
        probe >> first;
        SditInstance inst = sdit_build(first == "abp" ? abp_to_skew_circuit(parse_abp(text))
                                                      : parse_circuit(text));
        auto v = sdit_decide(inst, sdit_trials, seed);
        std::ostringstream out;
        out << verdict_block(v) << "relation " << inst.relation << "\nside " << inst.side << "\n";
        emit(out_path, out.str());
        return v.zero ? 0 : 1;
    } else if (*gen) {
        FamilyDescriptor fd = gen_family(gen_name, FamilyParams{gen_n, gen_d}, parse_field_flag(field_flag));
        std::string base = out_path.empty() ? gen_name + std::to_string(gen_n) : out_path;
        emit(base + ".circ", serialize_circuit(fd.construction));
        std::ostringstream meta;
        meta << serialize_family_meta(fd) << "field " << fd.construction.field().describe() << "\n";
        emit(base + ".meta", meta.str());
        std::string wrote = base + ".circ and " + base + ".meta";
        try {
            Poly oracle = family_oracle(gen_name, FamilyParams{gen_n, gen_d}, fd.construction.field());
            emit(base + ".poly", oracle.str());
            wrote += " and " + base + ".poly";
        } catch (const Error& e) {
            if (e.code() != Errc::BudgetExceeded) throw; // oracle only at desk sizes
        }
        std::cerr << "wrote " << wrote << "\n";
    } else if (*verify) {
        auto rep = verify_artifact_text(slurp(verify_file), seed, opts);
        std::ostringstream out;
        out << "verify " << (rep.pass ? "pass" : "fail") << "\nmode " << rep.mode << "\n";
        if (!rep.detail.empty()) out << "detail " << rep.detail << "\n";
        emit(out_path, out.str());
        return rep.pass ? 0 : 1;
    }
    return 0;
}

} // namespace

int main(int argc, char** argv) {
    try {
        return run(argc, argv);
    } catch (const Error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return e.code() == Errc::Usage ? 64 : 2;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    }
}

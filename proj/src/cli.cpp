#include "iaspa/cli.hpp"

#include <CLI11.hpp>

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <optional>
#include <sstream>

#include "iaspa/errors.hpp"
#include "iaspa/field_io.hpp"
#include "iaspa/kernels.hpp"
#include "iaspa/oracle.hpp"
#include "iaspa/scenario.hpp"
#include "iaspa/version.hpp"

namespace iaspa::cli {

namespace {

namespace fs = std::filesystem;

std::string fmt(double v) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

struct CommonArgs {
    std::string scenario;
    std::string out_dir = "out";
    std::vector<std::string> overrides;
    std::string cache_dir;
    int workers = 0;
};

void add_common(CLI::App* cmd, CommonArgs& args) {
    cmd->add_option("scenario", args.scenario, "scenario file")->required();
    cmd->add_option("-o,--out", args.out_dir, "output directory (default: out)");
    cmd->add_option("--set", args.overrides, "override: section.key=value")->take_all();
    cmd->add_option("--cache-dir", args.cache_dir,
                    "field cache directory (default: <out>/cache; env IASPA_CACHE_DIR)");
    cmd->add_option("--workers", args.workers, "worker threads (default: hardware)");
}

fs::path resolve_cache_dir(const CommonArgs& args) {
    if (!args.cache_dir.empty()) return args.cache_dir;
    if (const char* env = std::getenv("IASPA_CACHE_DIR")) return env;
    return fs::path(args.out_dir) / "cache";
}

struct Loaded {
    Scenario scenario;
    PlacementProblem problem;
    std::unique_ptr<FieldCache> cache;
};

Loaded load(const CommonArgs& args) {
    Scenario sc = load_scenario(args.scenario, args.overrides);
    auto cache = std::make_unique<FieldCache>(resolve_cache_dir(args), scene_hash(sc.scene),
                                              radio_hash(sc.radio));
    PlacementProblem prob = build_problem(sc, cache.get(), args.workers);
    return {std::move(sc), std::move(prob), std::move(cache)};
}

void write_text_file(const fs::path& path, const std::string& content) {
    fs::create_directories(path.parent_path().empty() ? "." : path.parent_path());
    std::ofstream out(path, std::ios::binary);  // binary: byte-stable newlines
    if (!out) throw IoError("cannot open " + path.string() + " for writing");
    out << content;
    if (!out) throw IoError("write failed: " + path.string());
}

/// Placement file or plain site list ("site" lines are ignored for lists of
/// indices); returns indices into the candidate set after validation.
TransmitterSet towers_from_file(const fs::path& path, const PlacementProblem& prob,
                                const CandidateSet& candidates) {
    std::ifstream in(path);
    if (!in) throw IoError("cannot open tower list " + path.string());
    PlacementFile pf = parse_placement_text(in, path.string());

    // Exclusion-zone validation on raw coordinates happens before any
    // computation touches the fields.
    for (const Site& s : pf.sites) {
        for (const auto& z : candidates.exclusion_zones) {
            if (zone_contains(z, s.pos))
                throw ValidationError("tower at (" + fmt(s.pos.x) + ", " + fmt(s.pos.y) +
                                      ") lies inside an exclusion zone");
        }
    }
    TransmitterSet T;
    T.fixed = pf.fixed;
    T.selected = pf.selected;
    for (int idx : T.all())
        if (idx < 0 || static_cast<std::size_t>(idx) >= prob.candidates.sites.size())
            throw ValidationError("tower index " + std::to_string(idx) +
                                  " is not a candidate of this scenario");
    return T;
}

TransmitterSet towers_from_indices(const std::vector<int>& indices,
                                   const PlacementProblem& prob) {
    TransmitterSet T;
    T.selected = indices;
    for (int idx : T.selected)
        if (idx < 0 || static_cast<std::size_t>(idx) >= prob.candidates.sites.size())
            throw ValidationError("tower index " + std::to_string(idx) +
                                  " is not a candidate of this scenario");
    return T;
}

int run_build_fields(const CommonArgs& args, std::ostream& out) {
    Loaded l = load(args);
    const auto stats = l.cache->stats();
    out << "fields " << l.problem.fields.size() << " cells " << l.problem.grid.cells()
        << " cache_hits " << stats.hits << " cache_misses " << stats.misses << " cache_dir "
        << l.cache->directory().string() << "\n";
    return kOk;
}

int run_place(const CommonArgs& args, std::ostream& out) {
    Loaded l = load(args);
    OptimizerConfig cfg = optimizer_config(l.scenario, args.workers);
    PlacementResult res = ia_spa(l.problem, cfg);
    const std::string text = placement_to_text(res, l.problem, cfg);
    const fs::path path = fs::path(args.out_dir) / "placement.txt";
    write_text_file(path, text);
    const double s_final = res.trajectory.empty() ? res.S_fixed : res.trajectory.back().S_after;
    out << "placed " << res.selection.selected.size() << " sites S " << fmt(s_final)
        << " terminated_by "
        << (res.terminated_by == TerminationReason::Budget
                ? "BUDGET"
                : res.terminated_by == TerminationReason::Coverage ? "COVERAGE" : "EXHAUSTED")
        << " -> " << path.string() << "\n";
    return kOk;
}

MetricsReport evaluate_towers(const Loaded& l, const TransmitterSet& T, const fs::path& out_dir,
                              std::ostream& out) {
    const PlacementProblem& prob = l.problem;
    MetricsReport rep = report(T, prob.fields, prob.radio, prob.objective.mode);
    Objective obj(prob.objective);
    const double S = obj.S_eval(T, prob.fields);

    write_text_file(out_dir / "report.txt", report_to_text(rep));
    write_raster_text(out_dir / "rate.field", rep.rate_bps, header_for(prob.grid));
    if (rep.has_interference)
        write_raster_text(out_dir / "interference.field", rep.interference_nw,
                          header_for(prob.grid));
    out << "towers " << T.size() << " S " << fmt(S) << " mean_rate_bps " << fmt(rep.mean_rate)
        << " edge_rate_p5_bps " << fmt(rep.edge_rate_p5) << "\n";
    return rep;
}

int run_evaluate(const CommonArgs& args, const std::string& towers_file,
                 const std::vector<int>& indices, std::ostream& out) {
    if (towers_file.empty() == indices.empty())
        throw ValidationError("evaluate needs exactly one of --towers or --indices");
    Loaded l = load(args);
    const TransmitterSet T = towers_file.empty()
                                 ? towers_from_indices(indices, l.problem)
                                 : towers_from_file(towers_file, l.problem, l.problem.candidates);
    if (T.empty()) throw ValidationError("tower list is empty");
    evaluate_towers(l, T, args.out_dir, out);
    return kOk;
}

struct StatRow {
    const char* name;
    double ref, nw;
};

int run_compare(const CommonArgs& args, const std::string& ref_file, const std::string& new_file,
                std::ostream& out) {
    Loaded l = load(args);
    const TransmitterSet Tref = towers_from_file(ref_file, l.problem, l.problem.candidates);
    const TransmitterSet Tnew = towers_from_file(new_file, l.problem, l.problem.candidates);
    const MetricsReport a = report(Tref, l.problem.fields, l.problem.radio, l.problem.objective.mode);
    const MetricsReport b = report(Tnew, l.problem.fields, l.problem.radio, l.problem.objective.mode);

    std::vector<StatRow> rows = {
        {"mean_rate_bps", a.mean_rate, b.mean_rate},
        {"std_rate_bps", a.std_rate, b.std_rate},
        {"max_rate_bps", a.max_rate, b.max_rate},
        {"edge_rate_p5_bps", a.edge_rate_p5, b.edge_rate_p5},
    };
    if (a.has_interference) {
        rows.push_back({"mean_interference_nw", a.mean_interf_nw, b.mean_interf_nw});
        rows.push_back({"std_interference_nw", a.std_interf_nw, b.std_interf_nw});
        rows.push_back({"max_interference_nw", a.max_interf_nw, b.max_interf_nw});
    }
    std::ostringstream text;
    text << "iaspa comparison v1\n";
    text << "statistic reference new change_percent\n";
    for (const StatRow& r : rows) {
        const double change = r.ref != 0.0 ? 100.0 * (r.nw - r.ref) / r.ref : 0.0;
        text << r.name << ' ' << fmt(r.ref) << ' ' << fmt(r.nw) << ' ' << fmt(change) << "\n";
    }
    write_text_file(fs::path(args.out_dir) / "comparison.txt", text.str());
    out << text.str();
    return kOk;
}

int run_baseline(const CommonArgs& args, int towers_count, int draws, std::uint64_t seed,
                 std::ostream& out) {
    Loaded l = load(args);
    int count = towers_count;
    if (count <= 0) {
        if (!l.scenario.optimizer.budget)
            throw ValidationError("baseline needs --towers-count or a scenario budget");
        count = *l.scenario.optimizer.budget;
    }
    const BaselineResult res = random_baseline(l.problem, count, draws, seed);
    std::ostringstream text;
    text << "iaspa baseline v1\n";
    text << "towers " << count << " draws " << res.draws << " seed " << seed << "\n";
    text << "averaged:\n" << report_to_text(res.averaged);
    for (int d = 0; d < res.draws; ++d) {
        text << "draw " << d << " subset";
        for (int idx : res.subsets[static_cast<std::size_t>(d)]) text << ' ' << idx;
        text << " S " << fmt(res.per_draw_S[static_cast<std::size_t>(d)]) << "\n";
        text << report_to_text(res.per_draw[static_cast<std::size_t>(d)]);
    }
    write_text_file(fs::path(args.out_dir) / "baseline.txt", text.str());
    out << "baseline towers " << count << " draws " << res.draws << " mean_rate_bps "
        << fmt(res.averaged.mean_rate) << "\n";
    return kOk;
}

int run_verify(const CommonArgs& args, int trials, std::uint64_t cap, std::ostream& out) {
    Loaded l = load(args);
    const PropertySuiteReport suite = property_suite(l.problem, trials, l.scenario.optimizer.seed);
    std::ostringstream text;
    text << suite.to_text();

    bool ok = suite.pass();
    if (l.scenario.optimizer.present && l.scenario.optimizer.budget) {
        OptimizerConfig cfg = optimizer_config(l.scenario, args.workers);
        const PlacementResult greedy = ia_spa(l.problem, cfg);
        const BruteForceResult oracle = brute_force_optimal(l.problem, cfg.budget_k, cap);
        const BoundCertificate cert = certify_bound(greedy, oracle, l.problem, cfg.epsilon);
        text << "bound " << (cert.pass ? "PASS" : "FAIL") << " ratio " << fmt(cert.ratio)
             << " bound_constant " << fmt(cert.bound) << " greedy_S " << fmt(cert.greedy_S)
             << " optimal_S " << fmt(cert.optimal_S) << " subsets " << oracle.subsets_evaluated
             << "\n";
        ok = ok && cert.pass;
    }
    write_text_file(fs::path(args.out_dir) / "verify.txt", text.str());
    out << text.str();
    return ok ? kOk : kFailure;
}

int run_export(const CommonArgs& args, const std::string& raster_file, const std::string& to,
               std::ostream& out) {
    const LoadedRaster loaded = read_raster_auto(raster_file, /*require_nonneg=*/false);
    const Raster& r = loaded.raster;
    double lo = r.v[0], hi = r.v[0];
    for (double v : r.v) {
        lo = std::min(lo, v);
        hi = std::max(hi, v);
    }
    const double span = hi > lo ? hi - lo : 1.0;

    std::ostringstream pgm;
    pgm << "P2\n" << r.cols << ' ' << r.rows << "\n255\n";
    // Raster row 0 is the southern edge; images start at the top.
    for (int row = r.rows - 1; row >= 0; --row) {
        for (int col = 0; col < r.cols; ++col) {
            const int g = static_cast<int>(std::lround(255.0 * (r.at(row, col) - lo) / span));
            pgm << g << (col + 1 == r.cols ? '\n' : ' ');
        }
    }
    const fs::path to_path = fs::path(args.out_dir) / to;
    write_text_file(to_path, pgm.str());
    write_text_file(to_path.string() + ".scale.txt",
                    "min " + fmt(lo) + "\nmax " + fmt(hi) +
                        "\nencoding gray = round(255 * (value - min) / (max - min))\n");
    out << "exported " << to_path.string() << " min " << fmt(lo) << " max " << fmt(hi) << "\n";
    return kOk;
}

}  // namespace

int run(const std::vector<std::string>& argv, std::ostream& out, std::ostream& err) {
    CLI::App app{"site-specific transmitter placement"};
    app.set_version_flag("--version", std::string(kVersion));
    app.require_subcommand(1);

    CommonArgs common;

    auto* c_build = app.add_subcommand("build-fields", "populate the field cache");
    add_common(c_build, common);

    auto* c_place = app.add_subcommand("place", "run the placement optimizer");
    add_common(c_place, common);

    auto* c_eval = app.add_subcommand("evaluate", "metrics for a transmitter list");
    add_common(c_eval, common);
    std::string towers_file;
    std::vector<int> indices;
    c_eval->add_option("--towers", towers_file, "placement file to evaluate");
    c_eval->add_option("--indices", indices, "candidate indices to evaluate")->delimiter(',');

    auto* c_cmp = app.add_subcommand("compare", "side-by-side reports with change columns");
    add_common(c_cmp, common);
    std::string ref_file, new_file;
    c_cmp->add_option("--ref", ref_file, "reference placement file")->required();
    c_cmp->add_option("--new", new_file, "new placement file")->required();

    auto* c_base = app.add_subcommand("baseline", "uniform random placement baseline");
    add_common(c_base, common);
    int towers_count = 0, draws = 10;
    std::uint64_t baseline_seed = 1;
    c_base->add_option("--towers-count", towers_count, "towers per draw (default: scenario budget)");
    c_base->add_option("--draws", draws, "number of draws (default 10)");
    c_base->add_option("--baseline-seed", baseline_seed, "seed for the draws (default 1)");

    auto* c_verify = app.add_subcommand("verify", "property suite + brute-force certification");
    add_common(c_verify, common);
    int trials = 1000;
    std::uint64_t cap = 200000;
    c_verify->add_option("--trials", trials, "property trials (default 1000)");
    c_verify->add_option("--cap", cap, "brute-force subset cap (default 200000)");

    auto* c_export = app.add_subcommand("export", "raster to portable graymap");
    std::string raster_file, to_name = "raster.pgm";
    c_export->add_option("--from", raster_file, "exchange-format raster file")->required();
    c_export->add_option("--to", to_name, "output image name (default raster.pgm)");
    c_export->add_option("-o,--out", common.out_dir, "output directory");

    std::vector<std::string> args_copy = argv;
    try {
        std::vector<char*> cargv;
        cargv.push_back(const_cast<char*>("iaspa"));
        for (std::string& a : args_copy) cargv.push_back(a.data());
        app.parse(static_cast<int>(cargv.size()), cargv.data());

        if (c_build->parsed()) return run_build_fields(common, out);
        if (c_place->parsed()) return run_place(common, out);
        if (c_eval->parsed()) return run_evaluate(common, towers_file, indices, out);
        if (c_cmp->parsed()) return run_compare(common, ref_file, new_file, out);
        if (c_base->parsed()) return run_baseline(common, towers_count, draws, baseline_seed, out);
        if (c_verify->parsed()) return run_verify(common, trials, cap, out);
        if (c_export->parsed()) return run_export(common, raster_file, to_name, out);
        err << "error: no subcommand\n";
        return kFailure;
    } catch (const CLI::ParseError& e) {
        if (e.get_exit_code() == 0) {  // --help / --version
            out << app.help();
            return kOk;
        }
        err << "parse error: " << e.what() << "\n";
        return kParseError;
    } catch (const ParseError& e) {
        err << "parse error: " << e.what() << "\n";
        return kParseError;
    } catch (const ValidationError& e) {
        err << "validation error: " << e.what() << "\n";
        return kValidationError;
    } catch (const InfeasibleTargetError& e) {
        err << "infeasible target: " << e.what() << "\n";
        return kInfeasibleTarget;
    } catch (const CapExceededError& e) {
        err << "cap exceeded: " << e.what() << "\n";
        return kCapExceeded;
    } catch (const IoError& e) {
        err << "io error: " << e.what() << "\n";
        return kIoError;
    } catch (const std::exception& e) {
        err << "error: " << e.what() << "\n";
        return kFailure;
    }
}

}  // namespace iaspa::cli

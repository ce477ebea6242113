// cubeterm: decision procedures for cube terms, cube term blockers and
// compatible crosses of finite idempotent algebras.

#include "cubeterm/constructions.hpp"
#include "cubeterm/cube.hpp"
#include "cubeterm/io.hpp"
#include "cubeterm/sweep.hpp"

#include "CLI11.hpp"
#include <nlohmann/json.hpp>

#include <chrono>
#include <cstdlib>
#include <fstream>
#include <iostream>

using nlohmann::ordered_json;
using namespace cubeterm;

namespace {

// exit codes: 0 ok / compatible, 1 incompatible, 2 error, 3 undecided
constexpr int kExitOk = 0;
constexpr int kExitIncompatible = 1;
constexpr int kExitError = 2;
constexpr int kExitUndecided = 3;

struct CommonOptions {
    uint64_t closure_cap = kDefaultClosureCap;
    int subuniverse_cap = kDefaultSubuniverseCap;
    int max_cross_d = 6;
    uint64_t work_cap = 0;
    int threads = 1;
    bool json_output = false;
    bool no_timestamp = false;
    std::string report_path;

    CubeOptions cube() const { return CubeOptions{closure_cap, threads, subuniverse_cap, 4096, work_cap}; }
};

uint64_t env_u64(const char* name, uint64_t fallback) {
    const char* v = std::getenv(name);
    return v ? std::strtoull(v, nullptr, 10) : fallback;
}

int env_int(const char* name, int fallback) {
    const char* v = std::getenv(name);
    return v ? std::atoi(v) : fallback;
}

void add_common(CLI::App* cmd, CommonOptions& opts) {
    opts.closure_cap = env_u64("CUBETERM_CLOSURE_CAP", kDefaultClosureCap);
    opts.subuniverse_cap = env_int("CUBETERM_SUBUNIVERSE_CAP", kDefaultSubuniverseCap);
    opts.max_cross_d = env_int("CUBETERM_MAX_CROSS_D", 6);
    opts.work_cap = env_u64("CUBETERM_WORK_CAP", 0);
    opts.threads = env_int("CUBETERM_THREADS", 1);
    cmd->add_option("--cap", opts.closure_cap, "closure cap in elements");
    cmd->add_option("--subuniverse-cap", opts.subuniverse_cap, "universe bound for exhaustive subuniverse search");
    cmd->add_option("--work-cap", opts.work_cap, "bound on operation applications per closure (0 = unlimited)");
    cmd->add_option("--threads", opts.threads, "worker threads");
    cmd->add_flag("--json", opts.json_output, "print the machine-readable report to stdout");
    cmd->add_flag("--no-timestamp", opts.no_timestamp, "omit the timestamp field from reports");
    cmd->add_option("--report", opts.report_path, "write the machine-readable report to a file");
}

void emit(const CommonOptions& opts, const std::string& command, ordered_json result,
          const std::string& human) {
    ordered_json report;
    report["tool"] = "cubeterm";
    report["command"] = command;
    if (!opts.no_timestamp) {
        auto now = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
        char buf[32];
        std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", std::gmtime(&now));
        report["timestamp"] = buf;
    }
    report["result"] = std::move(result);
    if (!opts.report_path.empty()) {
        std::ofstream out(opts.report_path, std::ios::binary);
        out << report.dump(2) << "\n";
    }
    if (opts.json_output)
        std::cout << report.dump(2) << "\n";
    else
        std::cout << human;
}

std::string describe_witness(const FiniteAlgebra& algebra, const CubeVerdict& v) {
    std::string text = "  witness: " + v.witness->to_string(algebra, v.column_names) + "\n  columns:";
    for (const auto& name : v.column_names) text += " " + name;
    return text + "\n";
}

int cmd_check_cross(const std::string& file, const std::string& bases_text, const CommonOptions& opts) {
    auto algebra = load_algebra_file(file);
    auto bases = parse_bases(bases_text, algebra.size());
    Cross cross(bases);
    if (cross.arity() > opts.max_cross_d)
        raise(Errc::InvalidArgument, "cross arity exceeds --max-d bound " + std::to_string(opts.max_cross_d));
    auto res = is_compatible_cross(algebra, cross);
    ordered_json result;
    result["cross"] = cross_json(cross);
    result["compatible"] = res.compatible;
    std::string human;
    if (res.compatible) {
        human = "compatible\n";
    } else {
        result["violation"] = violation_json(algebra, *res.violation);
        human = "incompatible\n  operation " + algebra.signature()[res.violation->op].name + ", map (";
        for (size_t j = 0; j < res.violation->map_m.size(); ++j)
            human += (j ? "," : "") + std::to_string(res.violation->map_m[j]);
        human += ")\n";
        for (size_t r = 0; r < res.violation->rows.size(); ++r) {
            human += "  row for base " + std::to_string(res.violation->row_base[r]) + ": (";
            for (size_t j = 0; j < res.violation->rows[r].size(); ++j)
                human += (j ? "," : "") + std::to_string(res.violation->rows[r][j]);
            human += ") -> " + std::to_string(res.violation->violating_output[r]) + "\n";
        }
    }
    emit(opts, "check-cross", std::move(result), human);
    return res.compatible ? kExitOk : kExitIncompatible;
}

int cmd_cube_dim(const std::string& file, const CommonOptions& opts, int max_d) {
    auto algebra = load_algebra_file(file);
    auto cube_opts = opts.cube();
    auto m = min_cube_dimension(algebra, cube_opts);
    ordered_json result;
    std::string human;
    int code = kExitOk;
    if (m.undecided) {
        result["status"] = "undecided";
        result["undecided_at"] = m.undecided_at;
        human = "undecided (cap exhausted at d=" + std::to_string(m.undecided_at) + ")\n";
        code = kExitUndecided;
    } else if (m.dimension) {
        if (max_d > 0 && *m.dimension > max_d) {
            result["status"] = "above-max-d";
            result["minimal_dimension"] = *m.dimension;
            human = "minimal cube dimension " + std::to_string(*m.dimension) + " exceeds --max-d\n";
        } else {
            result["status"] = "has-cube-term";
            result["minimal_dimension"] = *m.dimension;
            human = std::to_string(*m.dimension) + "\n";
            if (m.found && m.found->witness) {
                result["verdict"] = cube_verdict_json(algebra, *m.found);
                human += describe_witness(algebra, *m.found);
            }
        }
    } else {
        result["status"] = "none";
        human = "none";
        if (m.blocker) {
            result["blocker"] = blocker_json(algebra, *m.blocker);
            human += " (blocker found)\n  U = " + format_subset(m.blocker->u) +
                     ", B = " + format_subset(m.blocker->b) + "\n";
        } else {
            human += " (no cube term up to the signature bound)\n";
        }
    }
    emit(opts, "cube-dim", std::move(result), human);
    return code;
}

int cmd_find_blocker(const std::string& file, const CommonOptions& opts) {
    auto algebra = load_algebra_file(file);
    auto blocker = find_blocker(algebra, opts.subuniverse_cap);
    ordered_json result;
    std::string human;
    if (blocker) {
        result["found"] = true;
        result["blocker"] = blocker_json(algebra, *blocker);
        human = "blocker U = " + format_subset(blocker->u) + ", B = " + format_subset(blocker->b) + "\n";
        for (size_t op = 0; op < algebra.op_count(); ++op)
            human += "  " + algebra.signature()[op].name + ": U-absorbing in variable " +
                     std::to_string(blocker->absorbing_variable[op]) + "\n";
    } else {
        result["found"] = false;
        human = "none\n";
    }
    emit(opts, "find-blocker", std::move(result), human);
    return kExitOk;
}

int cmd_free_algebra(const std::string& file, const CommonOptions& opts) {
    auto algebra = load_algebra_file(file);
    CloseOptions copts{opts.closure_cap, opts.threads, opts.work_cap};
    auto fa = free_algebra_on_two(algebra, copts);
    ordered_json elements = ordered_json::array();
    std::string human = std::to_string(fa.size()) + " elements\n";
    std::vector<std::string> names{"x", "y"};
    for (size_t e = 0; e < fa.size(); ++e) {
        auto w = fa.witness(e);
        std::string term = w.to_string(algebra, names);
        elements.push_back(ordered_json{{"index", e}, {"term", term}, {"tuple", fa.element(e).as_ints()}});
        human += "  " + std::to_string(e) + ": " + term + "\n";
    }
    ordered_json result;
    result["size"] = fa.size();
    result["elements"] = std::move(elements);
    emit(opts, "free-algebra", std::move(result), human);
    return kExitOk;
}

int cmd_gen_example(const std::string& which, const std::vector<int>& arities, const std::string& out_path,
                    const CommonOptions& opts) {
    FiniteAlgebra algebra;
    if (which == "e51") {
        algebra = example_51(arities).algebra;
    } else if (which == "e52") {
        algebra = example_52(arities).algebra;
    } else if (which == "e52-maltsev") {
        algebra = example_52_maltsev(arities.empty() ? 1 : static_cast<int>(arities.size()));
    } else if (which == "z3") {
        algebra = z3_maltsev_groupoid();
    } else if (which == "semilattice") {
        algebra = two_element_semilattice(arities.empty() ? 2 : arities[0]);
    } else {
        raise(Errc::InvalidArgument, "unknown example '" + which +
                                         "' (expected e51, e52, e52-maltsev, z3 or semilattice)");
    }
    std::string text = serialize_algebra(algebra);
    if (out_path.empty() || out_path == "-") {
        std::cout << text;
    } else {
        std::ofstream out(out_path, std::ios::binary);
        out << text;
    }
    (void)opts;
    return kExitOk;
}

int cmd_sweep(const std::string& which, const CommonOptions& opts) {
    int k = 0;
    if (which == "groupoids-2")
        k = 2;
    else if (which == "groupoids-3")
        k = 3;
    else
        raise(Errc::InvalidArgument, "unknown sweep '" + which + "' (expected groupoids-2 or groupoids-3)");

    std::string human;
    ordered_json rows = ordered_json::array();
    auto summary = sweep_binary_groupoids(k, opts.cube(), opts.threads, [&](const SweepRow& row) {
        std::string line = "groupoid " + std::to_string(row.index) + ": ";
        line += row.dimension ? "cube-dim " + std::to_string(*row.dimension)
                              : (row.undecided ? "undecided" : "none (blocker)");
        if (!row.consistent) line += "  ** DICHOTOMY VIOLATION **";
        human += line + "\n";
        rows.push_back(ordered_json{{"index", row.index},
                                    {"table", row.table},
                                    {"dimension", row.dimension ? ordered_json(*row.dimension) : ordered_json()},
                                    {"blocker", row.blocker_found},
                                    {"consistent", row.consistent}});
    });
    uint64_t consistent = summary.total - summary.violations - summary.undecided;
    human += "dichotomy holds: " + std::to_string(consistent) + "/" + std::to_string(summary.total) + "\n";
    ordered_json result;
    result["universe"] = k;
    result["total"] = summary.total;
    result["maltsev"] = summary.maltsev;
    result["blocked"] = summary.blocked;
    result["undecided"] = summary.undecided;
    result["violations"] = summary.violations;
    result["rows"] = std::move(rows);
    emit(opts, "sweep", std::move(result), human);
    return summary.violations == 0 && summary.undecided == 0 ? kExitOk : kExitIncompatible;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"cube terms, blockers and compatible crosses of finite idempotent algebras"};
    app.require_subcommand(1);

    CommonOptions opts;

    std::string file, bases_text, example_name, out_path = "-", sweep_name;
    std::vector<int> arities;
    int max_d = 0;

    auto* check = app.add_subcommand("check-cross", "decide compatibility of a cross with an algebra");
    check->add_option("algebra", file, "algebra file")->required();
    check->add_option("--bases", bases_text, "cross bases, e.g. \"{0},{0,1}\"")->required();
    add_common(check, opts);

    auto* cube = app.add_subcommand("cube-dim", "minimal cube dimension or a blocker");
    cube->add_option("algebra", file, "algebra file")->required();
    cube->add_option("--max-d", max_d, "only report dimensions up to this bound");
    add_common(cube, opts);

    auto* blocker = app.add_subcommand("find-blocker", "search for a cube term blocker");
    blocker->add_option("algebra", file, "algebra file")->required();
    add_common(blocker, opts);

    auto* freealg = app.add_subcommand("free-algebra", "the free algebra on two generators, with witness terms");
    freealg->add_option("algebra", file, "algebra file")->required();
    add_common(freealg, opts);

    auto* gen = app.add_subcommand("gen-example", "emit one of the built-in algebras");
    gen->add_option("example", example_name, "e51 | e52 | e52-maltsev | z3 | semilattice")->required();
    gen->add_option("arities", arities, "operation arities (e51/e52) or the arity (semilattice)");
    gen->add_option("-o,--output", out_path, "output file, '-' for stdout");
    add_common(gen, opts);

    auto* sweep = app.add_subcommand("sweep", "exhaustive small-algebra suites");
    sweep->add_option("suite", sweep_name, "groupoids-2 | groupoids-3")->required();
    add_common(sweep, opts);

    CLI11_PARSE(app, argc, argv);

    try {
        if (check->parsed()) return cmd_check_cross(file, bases_text, opts);
        if (cube->parsed()) return cmd_cube_dim(file, opts, max_d);
        if (blocker->parsed()) return cmd_find_blocker(file, opts);
        if (freealg->parsed()) return cmd_free_algebra(file, opts);
        if (gen->parsed()) return cmd_gen_example(example_name, arities, out_path, opts);
        if (sweep->parsed()) return cmd_sweep(sweep_name, opts);
    } catch (const Error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitError;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitError;
    }
    return kExitError;
}

#include "hilfer/cli.hpp"

#include "hilfer/control.hpp"
#include "hilfer/evolution.hpp"
#include "hilfer/runtime.hpp"
#include "hilfer/selftest.hpp"
#include "hilfer/spectral_operator.hpp"
#include "hilfer/version.hpp"

#include <CLI11.hpp>
#include <json.hpp>

#include <cstdint>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <initializer_list>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

namespace hilfer::cli {

namespace {

using nlohmann::json;
namespace fs = std::filesystem;

// configuration problems exit 2, tolerance breaches exit 3
struct ConfigError : std::runtime_error {
    using std::runtime_error::runtime_error;
};
struct ToleranceError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

std::uint64_t fnv1a(const std::string& bytes) {
    std::uint64_t h = 1469598103934665603ull;
    for (unsigned char c : bytes) {
        h ^= c;
        h *= 1099511628211ull;
    }
    return h;
}

std::string hex64(std::uint64_t h) {
    char buf[17];
    std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
    return buf;
}

// splitmix64 stream; the standard distributions are implementation-defined,
// and the determinism contract wants identical bytes everywhere
struct SeedStream {
    std::uint64_t state;
    double next() {  // uniform in [-1, 1)
        state += 0x9E3779B97F4A7C15ull;
        std::uint64_t z = state;
        z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ull;
        z = (z ^ (z >> 27)) * 0x94D049BB133111EBull;
        z ^= z >> 31;
        return static_cast<double>(z >> 11) * 0x1.0p-52 - 1.0;
    }
};

void reject_unknown(const json& obj, const char* where,
                    std::initializer_list<const char*> allowed) {
    for (const auto& item : obj.items()) {
        bool known = false;
        for (const char* k : allowed)
            if (item.key() == k) {
                known = true;
                break;
            }
        if (!known)
            throw ConfigError("unknown key '" + item.key() + "' in " + where);
    }
}

const json& need(const json& obj, const char* where, const char* key) {
    auto it = obj.find(key);
    if (it == obj.end())
        throw ConfigError(std::string("missing key '") + key + "' in " + where);
    return *it;
}

double need_num(const json& obj, const char* where, const char* key) {
    const json& v = need(obj, where, key);
    if (!v.is_number())
        throw ConfigError(std::string("key '") + key + "' in " + where + " must be a number");
    return v.get<double>();
}

int need_int(const json& obj, const char* where, const char* key) {
    const json& v = need(obj, where, key);
    if (!v.is_number_integer())
        throw ConfigError(std::string("key '") + key + "' in " + where
                          + " must be an integer");
    return v.get<int>();
}

std::string need_str(const json& obj, const char* where, const char* key) {
    const json& v = need(obj, where, key);
    if (!v.is_string())
        throw ConfigError(std::string("key '") + key + "' in " + where + " must be a string");
    return v.get<std::string>();
}

std::vector<double> need_vec(const json& obj, const char* where, const char* key,
                             std::size_t size) {
    const json& v = need(obj, where, key);
    if (!v.is_array())
        throw ConfigError(std::string("key '") + key + "' in " + where + " must be an array");
    std::vector<double> out;
    out.reserve(v.size());
    for (const auto& e : v) {
        if (!e.is_number())
            throw ConfigError(std::string("array '") + key + "' in " + where
                              + " must hold numbers");
        out.push_back(e.get<double>());
    }
    if (size != 0 && out.size() != size)
        throw ConfigError(std::string("array '") + key + "' in " + where + " must have "
                          + std::to_string(size) + " entries");
    return out;
}

SpectralOperator build_operator(const json& j) {
    if (!j.is_object()) throw ConfigError("'operator' must be an object");
    std::string kind = need_str(j, "operator", "kind");
    int modes = need_int(j, "operator", "modes");
    SpectralOperator op;
    if (kind == "dirichlet_1d") {
        reject_unknown(j, "operator", {"kind", "length", "modes", "power"});
        op = dirichlet_laplacian_1d(need_num(j, "operator", "length"), modes);
    } else if (kind == "dirichlet_rect") {
        reject_unknown(j, "operator", {"kind", "lx", "ly", "modes", "power"});
        op = dirichlet_laplacian_rect(need_num(j, "operator", "lx"),
                                      need_num(j, "operator", "ly"), modes);
    } else if (kind == "robin_1d") {
        reject_unknown(j, "operator", {"kind", "length", "robin_coef", "grid_size",
                                       "modes", "power"});
        op = robin_laplacian_1d_fd(need_num(j, "operator", "length"),
                                   need_num(j, "operator", "robin_coef"),
                                   need_int(j, "operator", "grid_size"), modes);
    } else if (kind == "matrix") {
        reject_unknown(j, "operator", {"kind", "path", "modes", "power"});
        op = from_matrix_csv(need_str(j, "operator", "path"), modes);
    } else {
        throw ConfigError("unknown operator kind '" + kind + "'");
    }
    if (j.contains("power")) op = spectral_power(op, need_num(j, "operator", "power"));
    return op;
}

TimeGrid build_grid(const json& j, double horizon, double mu) {
    if (!j.is_object()) throw ConfigError("'grid' must be an object");
    reject_unknown(j, "grid", {"kind", "cells", "grading"});
    std::string kind = need_str(j, "grid", "kind");
    int cells = need_int(j, "grid", "cells");
    if (kind == "uniform" || kind == "steering") {
        if (j.contains("grading"))
            throw ConfigError("grid kind '" + kind + "' does not take a grading");
        return kind == "uniform" ? TimeGrid::uniform(horizon, cells)
                                 : steering_grid(mu, horizon, cells);
    }
    double r = need_num(j, "grid", "grading");
    if (kind == "graded_front") return TimeGrid::graded_front(horizon, cells, r);
    if (kind == "graded_back") return TimeGrid::graded_back(horizon, cells, r);
    if (kind == "graded_both") return TimeGrid::graded_both(horizon, cells, r);
    throw ConfigError("unknown grid kind '" + kind + "'");
}

SpatialWindow build_window(const json& j) {
    if (!j.is_object()) throw ConfigError("'window' must be an object");
    std::string kind = need_str(j, "window", "kind");
    SpatialWindow w;
    if (kind == "full") {
        reject_unknown(j, "window", {"kind"});
        w.kind = WindowKind::full;
    } else if (kind == "interval") {
        reject_unknown(j, "window", {"kind", "lo", "hi"});
        w.kind = WindowKind::interval;
        w.lo = need_num(j, "window", "lo");
        w.hi = need_num(j, "window", "hi");
    } else if (kind == "mask") {
        reject_unknown(j, "window", {"kind", "mask"});
        w.kind = WindowKind::mask;
        const json& m = need(j, "window", "mask");
        if (!m.is_array()) throw ConfigError("window mask must be an array");
        for (const auto& e : m) {
            if (!e.is_number_integer())
                throw ConfigError("window mask entries must be integers");
            w.mask.push_back(e.get<int>());
        }
    } else {
        throw ConfigError("unknown window kind '" + kind + "'");
    }
    return w;
}

ControlSignal build_forcing(const json& j, const TimeGrid& grid, int modes) {
    if (!j.is_object()) throw ConfigError("'forcing' must be an object");
    reject_unknown(j, "forcing", {"constant", "samples"});
    ControlSignal f;
    f.grid = grid;
    if (j.contains("constant") == j.contains("samples"))
        throw ConfigError("'forcing' needs exactly one of 'constant' or 'samples'");
    if (j.contains("constant")) {
        auto level = need_vec(j, "forcing", "constant", modes);
        f.modal.assign(grid.nodes.size(), level);
        return f;
    }
    const json& rows = need(j, "forcing", "samples");
    if (!rows.is_array() || rows.size() != grid.nodes.size())
        throw ConfigError("'forcing.samples' must hold one row per grid node");
    for (const auto& row : rows) {
        if (!row.is_array() || row.size() != static_cast<std::size_t>(modes))
            throw ConfigError("'forcing.samples' rows must have one entry per mode");
        std::vector<double> r;
        for (const auto& e : row) {
            if (!e.is_number())
                throw ConfigError("'forcing.samples' entries must be numbers");
            r.push_back(e.get<double>());
        }
        f.modal.push_back(std::move(r));
    }
    return f;
}

struct Emitter {
    fs::path dir;
    std::string prefix;
    bool verbose;
    std::vector<std::string> written;

    std::string path(const char* suffix) { return (dir / (prefix + suffix)).string(); }

    void note(const std::string& p) {
        written.push_back(fs::path(p).filename().string());
        if (verbose) std::printf("wrote %s\n", p.c_str());
    }

    std::ofstream open(const std::string& p) {
        std::ofstream out(p);
        if (!out) throw ConfigError("cannot write " + p);
        return out;
    }

    void meta(const std::string& task, const std::string& config_hash, json results) {
        json m;
        m["schema_version"] = 1;
        m["library_version"] = version_string;
        m["config_hash"] = config_hash;
        m["task"] = task;
        m["outputs"] = written;
        m["results"] = std::move(results);
        std::string p = path("_meta.json");
        auto out = open(p);
        out << m.dump(2) << "\n";
        note(p);
    }
};

void check_tolerance(const json& cfg, double measured, const char* label) {
    if (!cfg.contains("tolerance")) return;
    double tol = need_num(cfg, "scenario", "tolerance");
    if (!(measured <= tol)) {
        std::ostringstream msg;
        msg << label << " " << measured << " exceeds tolerance " << tol;
        throw ToleranceError(msg.str());
    }
}

// per-task key whitelists on top of the common scenario keys
void check_task_keys(const json& cfg, const std::string& task) {
    const std::initializer_list<const char*> common = {
        "schema_version", "task", "operator", "order", "horizon", "grid", "output", "seed"};
    auto allow = [&](std::initializer_list<const char*> extra) {
        std::vector<const char*> all(common.begin(), common.end());
        all.insert(all.end(), extra.begin(), extra.end());
        for (const auto& item : cfg.items()) {
            bool known = false;
            for (const char* k : all)
                if (item.key() == k) {
                    known = true;
                    break;
                }
            if (!known)
                throw ConfigError("unknown key '" + item.key() + "' in scenario for task "
                                  + task);
        }
    };
    if (task == "solve") allow({"initial", "forcing"});
    else if (task == "adjoint") allow({"terminal"});
    else if (task == "control-exact") allow({"target", "tolerance"});
    else if (task == "control-localized")
        allow({"target", "window", "ridge", "mean_mode", "tolerance"});
    else if (task == "duality") allow({"terminal", "forcing", "tolerance"});
    else if (task == "ucp-gram") allow({"window"});
    else if (task == "selftest") allow({});
    else throw ConfigError("unknown task '" + task + "'");
}

int run_scenario(const json& cfg, const std::string& config_hash, const Options& opt) {
    if (need_int(cfg, "scenario", "schema_version") != 1)
        throw ConfigError("unsupported schema_version (expected 1)");
    std::string task = need_str(cfg, "scenario", "task");
    check_task_keys(cfg, task);

    Emitter em;
    em.dir = ".";
    em.prefix = task;
    for (auto& c : em.prefix)
        if (c == '-') c = '_';
    if (cfg.contains("output")) {
        const json& o = cfg["output"];
        if (!o.is_object()) throw ConfigError("'output' must be an object");
        reject_unknown(o, "output", {"dir", "prefix"});
        if (o.contains("dir")) em.dir = need_str(o, "output", "dir");
        if (o.contains("prefix")) em.prefix = need_str(o, "output", "prefix");
    }
    if (!opt.out_dir.empty()) em.dir = opt.out_dir;
    em.verbose = opt.log_level != "quiet";
    if (!fs::is_directory(em.dir))
        throw ConfigError("output directory does not exist: " + em.dir.string());

    if (task == "selftest") {
        auto res = run_selftest();
        auto out = em.open(em.path("_selftest.txt"));
        out << res.log;
        em.note(em.path("_selftest.txt"));
        if (em.verbose) std::fputs(res.log.c_str(), stdout);
        em.meta(task, config_hash,
                json{{"checks", res.checks}, {"failures", res.failures}});
        if (res.failures > 0) {
            std::fprintf(stderr, "numerical failure: %d selftest checks failed\n",
                         res.failures);
            return 3;
        }
        return 0;
    }

    SpectralOperator op = build_operator(need(cfg, "scenario", "operator"));
    const json& jo = need(cfg, "scenario", "order");
    if (!jo.is_object()) throw ConfigError("'order' must be an object");
    reject_unknown(jo, "order", {"mu", "nu"});
    HilferOrder order{need_num(jo, "order", "mu"), need_num(jo, "order", "nu")};
    double horizon = need_num(cfg, "scenario", "horizon");
    TimeGrid grid = build_grid(need(cfg, "scenario", "grid"), horizon, order.mu);
    int M = op.modes();

    if (task == "solve") {
        auto u0 = need_vec(cfg, "scenario", "initial", M);
        Trajectory traj;
        if (cfg.contains("forcing")) {
            auto f = build_forcing(cfg["forcing"], grid, M);
            traj = solve_forced(op, order, u0, f, grid);
        } else {
            traj = solve_homogeneous(op, order, u0, grid);
        }
        export_trajectory(traj, em.path("_trajectory.csv"), em.path("_trajectory.json"));
        em.note(em.path("_trajectory.csv"));
        em.note(em.path("_trajectory.json"));
        em.meta(task, config_hash, json{{"nodes", grid.cells() + 1}, {"modes", M}});
        return 0;
    }

    if (task == "adjoint") {
        auto v0 = need_vec(cfg, "scenario", "terminal", M);
        auto traj = solve_adjoint(op, order, v0, grid);
        export_trajectory(traj, em.path("_trajectory.csv"), em.path("_trajectory.json"));
        em.note(em.path("_trajectory.csv"));
        em.note(em.path("_trajectory.json"));
        em.meta(task, config_hash, json{{"nodes", grid.cells() + 1}, {"modes", M}});
        return 0;
    }

    if (task == "control-exact" || task == "control-localized") {
        auto target = need_vec(cfg, "scenario", "target", M);
        bool mean_mode = false;
        ControlSignal f;
        if (task == "control-exact") {
            f = synthesize_exact_control(op, order.mu, target, grid);
        } else {
            SpatialWindow w = build_window(need(cfg, "scenario", "window"));
            double ridge = default_control_ridge;
            if (cfg.contains("ridge")) ridge = need_num(cfg, "scenario", "ridge");
            if (cfg.contains("mean_mode")) {
                if (!cfg["mean_mode"].is_boolean())
                    throw ConfigError("'mean_mode' must be a boolean");
                mean_mode = cfg["mean_mode"].get<bool>();
            }
            f = synthesize_localized_control(op, order, w, target, grid, ridge, mean_mode);
        }
        auto rep = verify_steering(op, order, f, target, grid, mean_mode);
        export_control(f, em.path("_control.csv"), em.path("_control.json"));
        em.note(em.path("_control.csv"));
        em.note(em.path("_control.json"));
        {
            auto out = em.open(em.path("_report.json"));
            out << rep.to_json() << "\n";
            em.note(em.path("_report.json"));
        }
        em.meta(task, config_hash,
                json{{"rel_error", rep.rel_error},
                     {"abs_error", rep.abs_error},
                     {"energy", rep.energy}});
        check_tolerance(cfg, rep.rel_error, "steering error");
        return 0;
    }

    if (task == "duality") {
        SeedStream rng{cfg.contains("seed")
                           ? static_cast<std::uint64_t>(need_int(cfg, "scenario", "seed"))
                           : 0u};
        ModalState v0(M);
        if (cfg.contains("terminal")) {
            v0 = need_vec(cfg, "scenario", "terminal", M);
        } else {
            for (auto& v : v0) v = rng.next();
        }
        ControlSignal f;
        if (cfg.contains("forcing")) {
            f = build_forcing(cfg["forcing"], grid, M);
        } else {
            f.grid = grid;
            f.modal.assign(grid.nodes.size(), ModalState(M, 0.0));
            for (auto& row : f.modal)
                for (auto& v : row) v = rng.next();
        }
        auto rep = duality_pairing(op, order, f, v0, grid);
        {
            auto out = em.open(em.path("_duality.csv"));
            char buf[96];
            std::snprintf(buf, sizeof buf, "%.16e,%.16e,%.16e\n", rep.lhs, rep.rhs,
                          rep.residual);
            out << "lhs,rhs,residual\n" << buf;
            em.note(em.path("_duality.csv"));
        }
        em.meta(task, config_hash,
                json{{"lhs", rep.lhs}, {"rhs", rep.rhs}, {"residual", rep.residual}});
        check_tolerance(cfg, rep.residual, "duality residual");
        return 0;
    }

    if (task == "ucp-gram") {
        SpatialWindow w = build_window(need(cfg, "scenario", "window"));
        GramResult gr;
        if (w.kind == WindowKind::interval) gr = window_gram(op, w.lo, w.hi, M);
        else if (w.kind == WindowKind::mask) gr = window_gram(op, w.mask, M);
        else throw ConfigError("ucp-gram needs an interval or mask window");
        {
            auto out = em.open(em.path("_gram.csv"));
            out << "n=" << gr.dim << "\n";
            char buf[32];
            for (int i = 0; i < gr.dim; ++i) {
                for (int k = 0; k < gr.dim; ++k) {
                    std::snprintf(buf, sizeof buf, "%.16e", gr.matrix[i * gr.dim + k]);
                    out << buf << (k + 1 < gr.dim ? "," : "\n");
                }
            }
            em.note(em.path("_gram.csv"));
        }
        em.meta(task, config_hash,
                json{{"min_eigenvalue", gr.min_eigenvalue},
                     {"eigenvalues", gr.eigenvalues}});
        return 0;
    }

    throw ConfigError("unknown task '" + task + "'");
}

} // namespace

int run_config(const std::string& config_path, const Options& opt) {
    try {
        std::ifstream in(config_path, std::ios::binary);
        if (!in) throw ConfigError("cannot read config " + config_path);
        std::ostringstream buf;
        buf << in.rdbuf();
        std::string bytes = buf.str();
        json cfg;
        try {
            cfg = json::parse(bytes);
        } catch (const json::parse_error& e) {
            throw ConfigError(std::string("config is not valid JSON: ") + e.what());
        }
        if (!cfg.is_object()) throw ConfigError("config root must be an object");
        if (opt.threads >= 1) set_thread_count(opt.threads);
        if (opt.log_level == "debug")
            std::fprintf(stderr, "config %s hash %s\n", config_path.c_str(),
                         hex64(fnv1a(bytes)).c_str());
        return run_scenario(cfg, hex64(fnv1a(bytes)), opt);
    } catch (const ConfigError& e) {
        std::fprintf(stderr, "config error: %s\n", e.what());
        return 2;
    } catch (const ToleranceError& e) {
        std::fprintf(stderr, "numerical failure: %s\n", e.what());
        return 3;
    } catch (const std::invalid_argument& e) {
        std::fprintf(stderr, "config error: %s\n", e.what());
        return 2;
    } catch (const std::exception& e) {
        std::fprintf(stderr, "numerical failure: %s\n", e.what());
        return 3;
    }
}

int dispatch(int argc, char** argv) {
    CLI::App app{"Hilfer fractional evolution toolkit"};
    app.require_subcommand(1);

    Options opt;
    std::string config_path;
    auto* run = app.add_subcommand("run", "execute a scenario config");
    run->add_option("config", config_path, "path to the scenario JSON")->required();
    run->add_option("--out", opt.out_dir, "output directory (overrides the config)");
    run->add_option("--threads", opt.threads, "worker threads for assembly stages");
    run->add_option("--log-level", opt.log_level, "quiet | info | debug")
        ->check(CLI::IsMember({"quiet", "info", "debug"}));

    auto* self = app.add_subcommand("selftest", "run the built-in invariant sweep");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        int rc = app.exit(e);
        return rc == 0 ? 0 : 2;
    }

    if (self->parsed()) {
        auto res = run_selftest();
        std::fputs(res.log.c_str(), stdout);
        std::printf("%d checks, %d failures\n", res.checks, res.failures);
        return res.failures == 0 ? 0 : 3;
    }
    return run_config(config_path, opt);
}

} // namespace hilfer::cli

// Command-line front end over the shared library.  Deliberately thin: all
// protocol logic sits behind the C interface; this file only maps flags to
// config keys, prints artifacts, and translates status codes to exit codes.
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <sstream>
#include <string>

#include <CLI11.hpp>
#include <json.hpp>

#include "bpkcnm.h"

namespace {

int exit_code(int status) {
    switch (status) {
        case BPKCNM_OK:
            return 0;
        case BPKCNM_ERR_CONFIG:
            return 1;
        case BPKCNM_ERR_PROTOCOL:
            return 2;
        default:
            return 3;
    }
}

// Flags shared by the pipeline subcommands.  Only flags the user actually
// passed are forwarded, so library defaults stay authoritative; the one
// exception is the per-command default adversary.
struct CommonFlags {
    long long n = 0;
    long long s = 0;
    long long seed = 0;
    long long prf_input_len = 0;
    long long action_budget = 0;
    long long rewind_cap_factor = 0;
    std::string group;
    std::string backend;
    std::string prg;
    std::string crs;
    std::string adversary;
    std::string aux;
    std::string out_path;

    CLI::Option* flag_n = nullptr;
    CLI::Option* flag_s = nullptr;
    CLI::Option* flag_seed = nullptr;
    CLI::Option* flag_prf = nullptr;
    CLI::Option* flag_budget = nullptr;
    CLI::Option* flag_cap = nullptr;
    CLI::Option* flag_group = nullptr;
    CLI::Option* flag_backend = nullptr;
    CLI::Option* flag_prg = nullptr;
    CLI::Option* flag_crs = nullptr;
    CLI::Option* flag_adversary = nullptr;
    CLI::Option* flag_aux = nullptr;

    std::string default_adversary;

    void attach(CLI::App* cmd, std::string adversary_default) {
        default_adversary = std::move(adversary_default);
        flag_n = cmd->add_option("--n", n, "security parameter (bit length)");
        flag_s = cmd->add_option("--s", s, "session bound per side");
        flag_seed = cmd->add_option("--seed", seed, "master seed (BPKCNM_SEED overrides)");
        flag_prf = cmd->add_option("--prf-input-len", prf_input_len, "PRF input width");
        flag_budget = cmd->add_option("--action-budget", action_budget,
                                      "max adversary actions per run");
        flag_cap = cmd->add_option("--rewind-cap-factor", rewind_cap_factor,
                                   "extraction attempt cap, as a multiple of the group order");
        flag_group = cmd->add_option("--group", group, "group: toy or large");
        flag_backend = cmd->add_option("--backend", backend, "proof backend: ideal or sigma");
        flag_prg = cmd->add_option("--prg", prg, "PRG backend");
        flag_crs = cmd->add_option("--crs", crs, "outcome distribution: identity or prg-seed");
        flag_adversary = cmd->add_option("--adversary", adversary,
                                         "relay, independent, null, stage1-prober, "
                                         "interleaver, or scripted:<file>");
        flag_aux = cmd->add_option("--aux", aux, "opaque auxiliary input echoed into traces");
        cmd->add_option("--out", out_path, "write the artifact to this file instead of stdout");
    }

    // Returns a status code; BPKCNM_OK when every forwarded key was taken.
    int apply(bpkcnm_config* cfg) const {
        if (flag_n->count() && bpkcnm_config_set_int(cfg, "n", n)) return BPKCNM_ERR_CONFIG;
        if (flag_s->count() && bpkcnm_config_set_int(cfg, "s", s)) return BPKCNM_ERR_CONFIG;
        if (flag_prf->count() && bpkcnm_config_set_int(cfg, "prf_input_len", prf_input_len))
            return BPKCNM_ERR_CONFIG;
        if (flag_budget->count() && bpkcnm_config_set_int(cfg, "action_budget", action_budget))
            return BPKCNM_ERR_CONFIG;
        if (flag_cap->count() &&
            bpkcnm_config_set_int(cfg, "rewind_cap_factor", rewind_cap_factor))
            return BPKCNM_ERR_CONFIG;
        if (flag_group->count() && bpkcnm_config_set_str(cfg, "group", group.c_str()))
            return BPKCNM_ERR_CONFIG;
        if (flag_backend->count() && bpkcnm_config_set_str(cfg, "backend", backend.c_str()))
            return BPKCNM_ERR_CONFIG;
        if (flag_prg->count() && bpkcnm_config_set_str(cfg, "prg", prg.c_str()))
            return BPKCNM_ERR_CONFIG;
        if (flag_crs->count() && bpkcnm_config_set_str(cfg, "crs", crs.c_str()))
            return BPKCNM_ERR_CONFIG;
        if (flag_aux->count() && bpkcnm_config_set_str(cfg, "aux", aux.c_str()))
            return BPKCNM_ERR_CONFIG;

        if (flag_adversary->count()) {
            if (bpkcnm_config_set_str(cfg, "adversary", adversary.c_str()))
                return BPKCNM_ERR_CONFIG;
        } else if (!default_adversary.empty()) {
            if (bpkcnm_config_set_str(cfg, "adversary", default_adversary.c_str()))
                return BPKCNM_ERR_CONFIG;
        }

        // The environment seed wins over the flag so wrapper scripts can
        // pin reruns without editing command lines.
        const char* env_seed = std::getenv("BPKCNM_SEED");
        if (env_seed && *env_seed) {
            char* end = nullptr;
            unsigned long long v = std::strtoull(env_seed, &end, 10);
            if (!end || *end != '\0') {
                std::fprintf(stderr, "error: BPKCNM_SEED is not a number: %s\n", env_seed);
                return BPKCNM_ERR_CONFIG;
            }
            if (bpkcnm_config_set_int(cfg, "seed", static_cast<long long>(v)))
                return BPKCNM_ERR_CONFIG;
        } else if (flag_seed->count()) {
            if (bpkcnm_config_set_int(cfg, "seed", seed)) return BPKCNM_ERR_CONFIG;
        }
        return BPKCNM_OK;
    }
};

int emit(bpkcnm_result* res, const std::string& out_path) {
    const char* text = bpkcnm_result_json(res);
    if (out_path.empty()) {
        std::printf("%s\n", text);
    } else {
        std::ofstream f(out_path, std::ios::binary);
        f << text << '\n';
        if (!f) {
            std::fprintf(stderr, "error: cannot write %s\n", out_path.c_str());
            bpkcnm_result_destroy(res);
            return 3;
        }
    }
    bpkcnm_result_destroy(res);
    return 0;
}

int run_pipeline(const CommonFlags& flags, int (*entry)(const bpkcnm_config*, bpkcnm_result**)) {
    bpkcnm_config* cfg = bpkcnm_config_new();
    if (!cfg) {
        std::fprintf(stderr, "error: out of memory\n");
        return 3;
    }
    int status = flags.apply(cfg);
    if (status == BPKCNM_OK) {
        bpkcnm_result* res = nullptr;
        status = entry(cfg, &res);
        bpkcnm_config_destroy(cfg);
        if (status == BPKCNM_OK) return emit(res, flags.out_path);
    } else {
        bpkcnm_config_destroy(cfg);
    }
    std::fprintf(stderr, "error: %s\n", bpkcnm_last_error());
    return exit_code(status);
}

int run_probe(const CommonFlags& flags, const std::string& relation, long long trials) {
    bpkcnm_config* cfg = bpkcnm_config_new();
    if (!cfg) {
        std::fprintf(stderr, "error: out of memory\n");
        return 3;
    }
    int status = flags.apply(cfg);
    if (status == BPKCNM_OK) {
        bpkcnm_result* res = nullptr;
        status = bpkcnm_probe_ski(cfg, relation.c_str(),
                                  trials > 0 ? static_cast<size_t>(trials) : 0, &res);
        bpkcnm_config_destroy(cfg);
        if (status == BPKCNM_OK) return emit(res, flags.out_path);
    } else {
        bpkcnm_config_destroy(cfg);
    }
    std::fprintf(stderr, "error: %s\n", bpkcnm_last_error());
    return exit_code(status);
}

int run_classify(const std::string& path, const std::string& out_path) {
    std::ifstream f(path, std::ios::binary);
    if (!f) {
        std::fprintf(stderr, "error: cannot read %s\n", path.c_str());
        return 1;
    }
    std::ostringstream buf;
    buf << f.rdbuf();
    std::string text = buf.str();
    bpkcnm_result* res = nullptr;
    int status = bpkcnm_classify(text.c_str(), &res);
    if (status != BPKCNM_OK) {
        std::fprintf(stderr, "error: %s\n", bpkcnm_last_error());
        return exit_code(status);
    }
    return emit(res, out_path);
}

int run_selftest(const std::string& out_path, bool flags_given) {
    if (flags_given)
        std::fprintf(stderr, "note: selftest pins its own parameters; "
                             "configuration flags are ignored\n");
    bpkcnm_result* res = nullptr;
    int status = bpkcnm_selftest(&res);
    if (status != BPKCNM_OK) {
        std::fprintf(stderr, "error: %s\n", bpkcnm_last_error());
        return exit_code(status);
    }
    // One line per criterion, then the artifact (file or stdout-suppressed:
    // the table is the point of the terminal run).
    nlohmann::json report = nlohmann::json::parse(bpkcnm_result_json(res));
    const auto& criteria = report.at("selftest").at("criteria");
    size_t passed = 0;
    for (const auto& c : criteria) {
        bool pass = c.at("pass").get<bool>();
        if (pass) ++passed;
        std::printf("%s %s  %s\n", c.at("id").get<std::string>().c_str(),
                    pass ? "PASS" : "FAIL", c.at("name").get<std::string>().c_str());
    }
    std::printf("selftest: %zu/%zu criteria passed\n", passed, criteria.size());
    bool all = report.at("selftest").at("all_pass").get<bool>();
    if (!out_path.empty()) {
        std::ofstream f(out_path, std::ios::binary);
        f << bpkcnm_result_json(res) << '\n';
        if (!f) {
            std::fprintf(stderr, "error: cannot write %s\n", out_path.c_str());
            bpkcnm_result_destroy(res);
            return 3;
        }
    }
    bpkcnm_result_destroy(res);
    return all ? 0 : 3;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"coin-tossing workbench: honest runs, simulated runs, the "
                 "interleaving attack, and self-checks"};
    app.require_subcommand(1);
    app.set_version_flag("--version", std::string(bpkcnm_version()));

    CommonFlags run_flags, sim_flags, attack_flags, probe_flags;
    std::string probe_relation = "side-detector";
    long long probe_trials = 200;
    std::string classify_path, classify_out;
    std::string selftest_out;

    CLI::App* cmd_run = app.add_subcommand("run", "run the experiment against an adversary");
    run_flags.attach(cmd_run, "");

    CLI::App* cmd_sim =
        app.add_subcommand("simulate", "run the simulated experiment (no left secret key)");
    sim_flags.attach(cmd_sim, "");

    CLI::App* cmd_attack =
        app.add_subcommand("attack", "run the two-session interleaving and its patched rerun");
    attack_flags.attach(cmd_attack, "interleaver");

    CLI::App* cmd_probe =
        app.add_subcommand("probe-ski", "measure secret-key independence of outputs");
    probe_flags.attach(cmd_probe, "");
    cmd_probe->add_option("--relation", probe_relation,
                          "const-true, sk-in-sta, or side-detector");
    cmd_probe->add_option("--trials", probe_trials, "number of simulation trials");

    CLI::App* cmd_classify =
        app.add_subcommand("classify", "classify right-session outputs in a saved artifact");
    cmd_classify->add_option("artifact", classify_path, "artifact file to read")->required();
    cmd_classify->add_option("--out", classify_out, "write the result to this file");

    CLI::App* cmd_selftest = app.add_subcommand("selftest", "run the eight shipped criteria");
    cmd_selftest->add_option("--out", selftest_out, "write the full report to this file");
    long long selftest_n = 0;
    CLI::Option* selftest_n_flag =
        cmd_selftest->add_option("--n", selftest_n, "accepted for symmetry; criteria pin sizes");

    CLI11_PARSE(app, argc, argv);

    if (cmd_run->parsed()) return run_pipeline(run_flags, bpkcnm_run);
    if (cmd_sim->parsed()) return run_pipeline(sim_flags, bpkcnm_simulate);
    if (cmd_attack->parsed()) return run_pipeline(attack_flags, bpkcnm_attack);
    if (cmd_probe->parsed()) return run_probe(probe_flags, probe_relation, probe_trials);
    if (cmd_classify->parsed()) return run_classify(classify_path, classify_out);
    if (cmd_selftest->parsed())
        return run_selftest(selftest_out, selftest_n_flag->count() > 0);
    return 1;
}

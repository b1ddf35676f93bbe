// pwlab command-line surface: run scenario files, launch the three attacks
// against either protocol, sweep candidate reduction, and check the golden
// regression vectors.
//
// Exit codes: 0 success, 1 attack-oracle/expectation or golden mismatch,
// 2 configuration or I/O error.

#include <CLI11.hpp>

#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>

#include "pwlab/error.hpp"
#include "pwlab/harness.hpp"
#include "pwlab/rng.hpp"

namespace fs = std::filesystem;
using namespace pwlab;

namespace {

void load_extra_presets(const std::string& presets_file) {
    if (!presets_file.empty()) {
        load_presets_file(presets_file);
        return;
    }
    if (auto dir = preset_dir_from_env()) {
        const fs::path conf = *dir / "presets.conf";
        if (fs::exists(conf))
            load_presets_file(conf);
    }
}

void write_outputs(const RunOutput& out, const std::string& out_dir, RunReport& report) {
    if (out_dir.empty())
        return;
    const fs::path dir = out_dir;
    const fs::path tpath = dir / (report.scenario + ".transcript.txt");
    report.transcript_ref = tpath.string();
    emit_transcript(out.transcript, tpath);
    fs::create_directories(dir);
    std::ofstream rf(dir / (report.scenario + ".report.txt"), std::ios::binary | std::ios::trunc);
    if (!rf)
        throw Error(Errc::IoError, "cannot write report file");
    rf << report.to_text();
}

int cmd_run(const std::string& scenario_path, const std::string& store_path,
            const std::string& out_dir) {
    const Scenario s = parse_scenario_file(scenario_path);
    PasswordStore store = store_path.empty() ? PasswordStore() : PasswordStore(store_path);
    RunOutput out = run_scenario(s, store);
    write_outputs(out, out_dir, out.report);
    std::cout << out.report.to_text();
    return out.report.matches_expectations(s) ? 0 : 1;
}

int cmd_attack(const std::string& kind, const std::string& target, const std::string& preset,
               uint64_t seed, const std::string& pw_hex, const std::string& new_pw_hex,
               const std::string& c_hex, const std::string& dict_path,
               const std::string& compromised, bool expect_success, bool expect_failure,
               const std::string& out_dir) {
    if (expect_success && expect_failure)
        throw Error(Errc::ConfigError, "--expect-success and --expect-failure conflict");

    Scenario s;
    s.protocol = target == "chang" ? ProtocolKind::Chang : ProtocolKind::Proposed;
    s.name = "attack-" + kind + "-" + target;
    s.preset = preset;
    s.seed = seed;
    s.pw = Password::from_hex_str(pw_hex);
    s.new_pw = Password::from_hex_str(new_pw_hex);
    if (!dict_path.empty())
        s.dictionary_path = fs::path(dict_path);

    if (kind == "offline-guess") {
        s.attack = AttackKind::OfflineGuess;
    } else if (kind == "dos") {
        s.attack = AttackKind::DoS;
        s.attack_c = from_hex(c_hex);
    } else if (kind == "known-key") {
        s.attack = AttackKind::KnownKey;
        s.compromised = compromised.empty()
                            ? (s.protocol == ProtocolKind::Chang ? CompromiseSpec::Key
                                                                 : CompromiseSpec::Key1)
                            : compromise_from_name(compromised);
    } else {
        throw Error(Errc::ConfigError, "attack kind must be offline-guess, dos or known-key");
    }
    if (expect_success)
        s.expect_attack_success = true;
    if (expect_failure)
        s.expect_attack_success = false;

    PasswordStore store;
    RunOutput out = run_scenario(s, store);
    write_outputs(out, out_dir, out.report);
    std::cout << out.report.to_text();
    return out.report.matches_expectations(s) ? 0 : 1;
}

int cmd_sweep(const std::string& target, const std::string& preset, uint64_t seed,
              const std::string& pw_hex, const std::string& new_pw_hex,
              const std::string& dict_path, unsigned runs) {
    for (unsigned i = 0; i < runs; ++i) {
        Scenario s;
        s.name = "sweep-" + std::to_string(i);
        s.protocol = target == "chang" ? ProtocolKind::Chang : ProtocolKind::Proposed;
        s.preset = preset;
        s.seed = seed + i;
        s.pw = Password::from_hex_str(pw_hex);
        s.new_pw = Password::from_hex_str(new_pw_hex);
        s.dictionary_path = fs::path(dict_path);
        s.attack = AttackKind::OfflineGuess;

        PasswordStore store;
        RunOutput out = run_scenario(s, store);
        const GuessReport& g = *out.report.guess;
        std::cout << "run=" << i << " seed=" << s.seed << " target=" << target
                  << " dict=" << g.dictionary_size << " total_pairs=" << g.total_pairs
                  << " baseline=" << g.baseline_count << " survivors=" << g.survivor_count
                  << " reduction_ratio=" << g.reduction_ratio()
                  << " vs_baseline=" << g.ratio_vs_baseline()
                  << " true_pair=" << out.report.verdict->evidence.at("true_pair_survives")
                  << "\n";
    }
    return 0;
}

int cmd_verify_golden(const std::string& testdata) {
    const auto checks = verify_golden(testdata);
    bool all_ok = true;
    for (const GoldenCheck& c : checks) {
        std::cout << (c.ok ? "[ok]   " : "[FAIL] ") << c.name << ": " << c.detail << "\n";
        all_ok = all_ok && c.ok;
    }
    return all_ok ? 0 : 1;
}

int cmd_gen_golden(const std::string& testdata) {
    write_golden(testdata);
    for (std::string_view name : kGoldenScenarios)
        std::cout << "wrote golden transcript+report for " << name << "\n";
    return 0;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"password-change protocol lab: run both protocols, attack them, "
                 "and check the verdicts against the expected oracles"};
    app.require_subcommand(1);

    std::string presets_file;
    app.add_option("--presets", presets_file, "extra group presets file (name.p/q/g hex)");

    // run
    auto* run = app.add_subcommand("run", "run a scenario file");
    std::string scenario_path, store_path, out_dir;
    run->add_option("scenario", scenario_path, "scenario file")->required();
    run->add_option("--store", store_path, "password store backing file");
    run->add_option("--out", out_dir, "directory for transcript/report output");

    // attack
    auto* attack = app.add_subcommand("attack", "run one attack against a protocol");
    std::string kind, target, preset = "desk", pw_hex = "07", new_pw_hex = "0b", c_hex = "05";
    std::string dict_path, compromised, attack_out;
    uint64_t seed = 42;
    bool expect_success = false, expect_failure = false;
    attack->add_option("kind", kind, "offline-guess | dos | known-key")->required();
    attack->add_option("--target", target, "chang | proposed")
        ->required()
        ->check(CLI::IsMember({"chang", "proposed"}));
    attack->add_option("--preset", preset, "group preset (default desk)");
    attack->add_option("--seed", seed, "deterministic seed (default: drawn from OS entropy)");
    attack->add_option("--pw", pw_hex, "current password, hex (default 07)");
    attack->add_option("--new-pw", new_pw_hex, "new password, hex (default 0b)");
    attack->add_option("--c", c_hex, "DoS tamper bytes, hex (default 05)");
    attack->add_option("--dict", dict_path, "dictionary file (newline-separated hex)");
    attack->add_option("--compromised", compromised,
                       "known-key material: key | key1 | key2 | both-keys | current-password");
    attack->add_flag("--expect-success", expect_success, "exit 1 unless the attack succeeds");
    attack->add_flag("--expect-failure", expect_failure, "exit 1 unless the attack fails");
    attack->add_option("--out", attack_out, "directory for transcript/report output");

    // sweep
    auto* sweep = app.add_subcommand("sweep", "candidate-reduction sweep (offline guessing)");
    std::string sweep_target, sweep_preset = "desk", sweep_pw = "07", sweep_new = "0b", sweep_dict;
    uint64_t sweep_seed = 42;
    unsigned sweep_runs = 1;
    sweep->add_option("--target", sweep_target, "chang | proposed")
        ->required()
        ->check(CLI::IsMember({"chang", "proposed"}));
    sweep->add_option("--dict", sweep_dict, "dictionary file")->required();
    sweep->add_option("--preset", sweep_preset, "group preset (default desk)");
    sweep->add_option("--seed", sweep_seed, "base seed (default: drawn from OS entropy)");
    sweep->add_option("--pw", sweep_pw, "current password, hex");
    sweep->add_option("--new-pw", sweep_new, "new password, hex");
    sweep->add_option("--runs", sweep_runs, "number of seeded runs (default 1)");

    // verify-golden / gen-golden
    auto* verify = app.add_subcommand("verify-golden", "recompute frozen regression vectors");
    std::string testdata = "testdata";
    verify->add_option("--testdata", testdata, "testdata directory (default ./testdata)");
    auto* gen = app.add_subcommand("gen-golden", "regenerate golden transcripts/reports");
    std::string gen_testdata = "testdata";
    gen->add_option("--testdata", gen_testdata, "testdata directory (default ./testdata)");

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return 2;
    }

    try {
        load_extra_presets(presets_file);
        // seeds come from OS entropy unless pinned; the report echoes the
        // seed either way, so any run can be replayed
        if (attack->parsed() && attack->count("--seed") == 0)
            seed = DetRng::from_entropy().seed();
        if (sweep->parsed() && sweep->count("--seed") == 0)
            sweep_seed = DetRng::from_entropy().seed();
        if (run->parsed())
            return cmd_run(scenario_path, store_path, out_dir);
        if (attack->parsed())
            return cmd_attack(kind, target, preset, seed, pw_hex, new_pw_hex, c_hex, dict_path,
                              compromised, expect_success, expect_failure, attack_out);
        if (sweep->parsed())
            return cmd_sweep(sweep_target, sweep_preset, sweep_seed, sweep_pw, sweep_new,
                             sweep_dict, sweep_runs);
        if (verify->parsed())
            return cmd_verify_golden(testdata);
        if (gen->parsed())
            return cmd_gen_golden(gen_testdata);
    } catch (const Error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    }
    return 2;
}

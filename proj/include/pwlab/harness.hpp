#pragma once

#include <array>
#include <filesystem>
#include <iosfwd>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "pwlab/adversary.hpp"
#include "pwlab/codec.hpp"
#include "pwlab/group.hpp"

namespace pwlab {

// Scenario runner and persistence: flat key-value scenario files, hex
// dictionaries, the shared password store, and the normative line-based
// transcript format. Everything external is hex text so artifacts diff
// cleanly and replay bit-exactly.

/// Which secrets the known-key attacker starts with.
enum class CompromiseSpec { None, Key, Key1, Key2, BothKeys, CurrentPassword };

std::string_view compromise_name(CompromiseSpec c);
CompromiseSpec compromise_from_name(std::string_view name);

struct Scenario {
    std::string name;
    ProtocolKind protocol = ProtocolKind::Chang;
    std::string preset = "tiny";
    uint64_t seed = 0;
    Password pw = Password::from_hex_str("07");
    Password new_pw = Password::from_hex_str("0b");
    Identity id_a = Identity::from_text("alice");
    Identity id_b = Identity::from_text("bob");
    std::optional<std::filesystem::path> dictionary_path;

    std::optional<AttackKind> attack;
    Bytes attack_c;                                  // DoS tamper bytes
    CompromiseSpec compromised = CompromiseSpec::None; // known-key material

    TamperPlan tamper_plan; // non-attack tampering (bit flips, drops)

    std::optional<bool> expect_attack_success;
    std::optional<std::string> expect_alice_phase;
    std::optional<std::string> expect_bob_phase;
};

/// Parses the flat `key = value` scenario format. Unknown keys are errors;
/// comments start with '#'. Throws Error(ConfigError/IoError).
Scenario parse_scenario_file(const std::filesystem::path& path);
Scenario parse_scenario_text(const std::string& text, const std::filesystem::path& base_dir);

/// Newline-separated hex passwords; '#' comments and blank lines ignored.
std::vector<Password> load_dictionary(const std::filesystem::path& path);

/**
 * Identity -> current password map with write-then-rename persistence. A
 * rejected session never touches the store; updates land atomically with
 * the accepting phase transition.
 */
class PasswordStore {
public:
    explicit PasswordStore(std::filesystem::path backing_file);

    /// In-memory store without persistence.
    PasswordStore() = default;

    std::optional<Password> lookup(const Identity& id) const;
    void update(const Identity& id, const Password& pw);

    size_t size() const { return entries_.size(); }
    uint64_t mutations() const { return mutations_; }

private:
    void load();
    void save() const;

    std::optional<std::filesystem::path> path_;
    std::map<Bytes, Password> entries_;
    uint64_t mutations_ = 0;
};

struct RunReport {
    std::string scenario;
    ProtocolKind protocol = ProtocolKind::Chang;
    std::string preset;
    uint64_t seed = 0;
    std::string alice_phase;
    std::string bob_phase;
    std::map<std::string, std::string> keys; // role -> hex of derived keys
    std::optional<AttackVerdict> verdict;
    std::optional<GuessReport> guess;
    size_t iterations_used = 0;
    bool store_updated = false;
    int64_t wall_ms = 0;
    std::string transcript_ref;

    /// Deterministic rendering; wall_ms is excluded so reports golden-compare.
    std::string to_text(bool include_wall_time = true) const;

    /// True when every expect.* field of the scenario matches the outcome.
    bool matches_expectations(const Scenario& s) const;
};

struct RunOutput {
    Transcript transcript;
    RunReport report;
};

/// Executes one scenario deterministically from its seed: the session (with
/// attack or tamper plan if configured), the attack oracle, and the store
/// update on acceptance. Protocol rejections are report content, not errors.
RunOutput run_scenario(const Scenario& s, PasswordStore& store);

// Transcript serialization (normative format):
//   # pwlab transcript v1
//   protocol=<chang|proposed>
//   preset=<name>
//   id_a=<hex> / id_b=<hex> / complete=<bool>
//   <seq> <a_to_b|b_to_a> <action> <payload-hex|-> <original-hex|->
void emit_transcript(const Transcript& t, std::ostream& out);
void emit_transcript(const Transcript& t, const std::filesystem::path& path);
std::string transcript_to_text(const Transcript& t);

/// Inverse of emit_transcript; params are resolved through the preset
/// registry. Round-trips byte-exactly.
Transcript parse_transcript_text(const std::string& text);
Transcript parse_transcript_file(const std::filesystem::path& path);

// Preset registry: the built-ins plus any groups loaded from a presets file
// (lines `name.p = <hex>` / `name.q` / `name.g`). Loaded groups are
// validated by make_params and live for the process.
const GroupParams& resolve_preset(const std::string& name);
void load_presets_file(const std::filesystem::path& path);

/// Directory consulted for presets.conf when PWLAB_PRESET_DIR is set.
std::optional<std::filesystem::path> preset_dir_from_env();

// Golden regression vectors: frozen hash_H digests plus one honest and one
// DoS transcript per protocol, all under <testdata>/golden. Scenarios are
// re-run twice and must be byte-identical to each other and to the frozen
// files (wall time excluded from report comparison).

struct GoldenCheck {
    std::string name;
    bool ok = false;
    std::string detail;
};

constexpr std::array<std::string_view, 4> kGoldenScenarios = {
    "chang-honest", "chang-dos", "proposed-honest", "proposed-dos"};

std::vector<GoldenCheck> verify_golden(const std::filesystem::path& testdata_dir);

/// Regenerates golden transcripts/reports from the committed scenarios.
void write_golden(const std::filesystem::path& testdata_dir);

} // namespace pwlab

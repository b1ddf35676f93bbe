#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <unistd.h>

#include <filesystem>
#include <fstream>

#include "pwlab/chang.hpp"
#include "pwlab/error.hpp"
#include "pwlab/harness.hpp"
#include "pwlab/proposed.hpp"

using namespace pwlab;
namespace fs = std::filesystem;

namespace {

struct TempDir {
    fs::path path;
    TempDir() {
        path = fs::temp_directory_path() /
               ("pwlab-test-" + std::to_string(::getpid()) + "-" +
                std::to_string(reinterpret_cast<uintptr_t>(this)));
        fs::create_directories(path);
    }
    ~TempDir() { fs::remove_all(path); }
};

void write_text(const fs::path& p, const std::string& text) {
    std::ofstream out(p, std::ios::binary);
    out << text;
}

const std::string kProposedScn = "name = t\n"
                                 "protocol = proposed\n"
                                 "preset = tiny\n"
                                 "seed = 42\n"
                                 "pw = 07\n"
                                 "new_pw = 0b\n"
                                 "dictionary = dict.txt\n";

std::string tiny_dict_text() {
    std::string text;
    for (int v = 1; v <= 16; ++v) {
        char buf[4];
        std::snprintf(buf, sizeof buf, "%02x\n", v);
        text += buf;
    }
    return text;
}

} // namespace

TEST_CASE("scenario files parse with defaults and reject junk") {
    TempDir tmp;
    write_text(tmp.path / "dict.txt", tiny_dict_text());
    const Scenario s = parse_scenario_text(kProposedScn, tmp.path);
    CHECK(s.name == "t");
    CHECK(s.protocol == ProtocolKind::Proposed);
    CHECK(s.seed == 42);
    CHECK(s.pw.hex() == "07");
    CHECK(s.dictionary_path->parent_path() == tmp.path);
    CHECK(s.id_a == Identity::from_text("alice")); // default identities

    CHECK_THROWS_AS(parse_scenario_text("name = x\nbogus = 1\n", "."), Error);
    CHECK_THROWS_AS(parse_scenario_text("protocol = chang\n", "."), Error); // unnamed
    // attack parameters present iff attack present
    CHECK_THROWS_AS(parse_scenario_text("name = x\nattack.c = 05\n", "."), Error);
    CHECK_THROWS_AS(parse_scenario_text("name = x\nattack = dos\n", "."), Error);
    CHECK_THROWS_AS(parse_scenario_text("name = x\nattack = known-key\n", "."), Error);
    CHECK_THROWS_AS(
        parse_scenario_text("name = x\nattack = dos\nattack.c = 05\ntamper.1.a_to_b = drop\n",
                            "."),
        Error);

    const Scenario tampered = parse_scenario_text(
        "name = x\ntamper.2.b_to_a = drop\ntamper.1.a_to_b = xor@1:05\ninject.3.a_to_b = 00\n",
        ".");
    CHECK(tampered.tamper_plan.rules.size() == 2);
    CHECK(tampered.tamper_plan.injections.size() == 1);
}

TEST_CASE("dictionary loading") {
    TempDir tmp;
    write_text(tmp.path / "d.txt", "# comment\n07\n\n0b\n");
    const auto dict = load_dictionary(tmp.path / "d.txt");
    REQUIRE(dict.size() == 2);
    CHECK(dict[0].hex() == "07");

    CHECK_THROWS_AS(load_dictionary(tmp.path / "missing.txt"), Error);
    write_text(tmp.path / "bad.txt", "zz\n");
    CHECK_THROWS_AS(load_dictionary(tmp.path / "bad.txt"), Error);
    write_text(tmp.path / "empty.txt", "# nothing\n");
    CHECK_THROWS_AS(load_dictionary(tmp.path / "empty.txt"), Error);
}

TEST_CASE("password store persists atomically") {
    TempDir tmp;
    const fs::path file = tmp.path / "store.txt";
    {
        PasswordStore store(file);
        CHECK_FALSE(store.lookup(Identity::from_text("alice")).has_value());
        store.update(Identity::from_text("alice"), Password::from_hex_str("0b"));
        CHECK(store.mutations() == 1);
    }
    CHECK_FALSE(fs::exists(file.string() + ".tmp")); // rename completed
    PasswordStore reloaded(file);
    REQUIRE(reloaded.lookup(Identity::from_text("alice")).has_value());
    CHECK(reloaded.lookup(Identity::from_text("alice"))->hex() == "0b");
}

TEST_CASE("run_scenario is deterministic and updates the store only on acceptance") {
    TempDir tmp;
    write_text(tmp.path / "dict.txt", tiny_dict_text());
    const Scenario s = parse_scenario_text(kProposedScn, tmp.path);

    PasswordStore store1, store2;
    RunOutput r1 = run_scenario(s, store1);
    RunOutput r2 = run_scenario(s, store2);
    CHECK(transcript_to_text(r1.transcript) == transcript_to_text(r2.transcript));
    CHECK(r1.report.to_text(false) == r2.report.to_text(false));
    CHECK(r1.report.bob_phase == "Accepted");
    CHECK(r1.report.store_updated);
    CHECK(store1.mutations() == 1);
    CHECK(store1.lookup(s.id_a)->hex() == "0b");
    CHECK(r1.report.iterations_used == 11);

    // chained run: the store now feeds Bob the updated password, and the
    // scenario's stale pw no longer matches -> no acceptance, no mutation
    RunOutput r3 = run_scenario(s, store1);
    CHECK(r3.report.bob_phase != "Accepted");
    CHECK_FALSE(r3.report.store_updated);
    CHECK(store1.mutations() == 1);
}

TEST_CASE("a missing dictionary is an IoError and leaves the store untouched") {
    TempDir tmp;
    const Scenario s = parse_scenario_text(kProposedScn, tmp.path); // dict.txt never written
    PasswordStore store;
    CHECK_THROWS_AS(run_scenario(s, store), Error);
    try {
        run_scenario(s, store);
    } catch (const Error& e) {
        CHECK(e.code() == Errc::IoError);
    }
    CHECK(store.mutations() == 0);
}

TEST_CASE("tamper plans from scenario files reach the channel") {
    TempDir tmp;
    write_text(tmp.path / "dict.txt", tiny_dict_text());
    const Scenario s = parse_scenario_text(kProposedScn + "tamper.3.a_to_b = xor@0:80\n"
                                                          "expect.bob_phase = Rejected\n",
                                           tmp.path);
    PasswordStore store;
    RunOutput r = run_scenario(s, store);
    CHECK(r.report.bob_phase == "Rejected");
    CHECK(r.report.matches_expectations(s));
    CHECK_FALSE(r.report.store_updated);
    CHECK(r.transcript.events[2].action == ChannelAction::Modified);
}

TEST_CASE("transcripts round-trip through the normative text format") {
    TempDir tmp;
    write_text(tmp.path / "dict.txt", tiny_dict_text());
    Scenario s = parse_scenario_text(kProposedScn, tmp.path);
    s.attack = AttackKind::DoS;
    s.attack_c = from_hex("05");
    PasswordStore store;
    RunOutput r = run_scenario(s, store);

    const std::string text = transcript_to_text(r.transcript);
    const Transcript back = parse_transcript_text(text);
    CHECK(transcript_to_text(back) == text); // byte-exact round trip
    REQUIRE(back.events.size() == r.transcript.events.size());
    CHECK(back.protocol == r.transcript.protocol);
    CHECK(back.complete == r.transcript.complete);
    CHECK(back.events[0].original.has_value());

    // replaying the wire bytes reconstructs every message object
    const GroupParams& params = *back.params;
    const PropMsg1 m1 = PropMsg1::parse(back.delivered(1), params);
    CHECK(m1.to_bytes() == back.delivered(1));
    const PropMsg2 m2 = PropMsg2::parse(back.delivered(2), params);
    CHECK(m2.to_bytes() == back.delivered(2));
    const PropMsg3 m3 = PropMsg3::parse(back.delivered(3), params);
    CHECK(m3.to_bytes() == back.delivered(3));

    // file round trip
    emit_transcript(r.transcript, tmp.path / "t.txt");
    CHECK(transcript_to_text(parse_transcript_file(tmp.path / "t.txt")) == text);
}

TEST_CASE("chang transcripts replay through the chang decoders") {
    const Scenario s = parse_scenario_text("name = c\nprotocol = chang\npreset = tiny\n"
                                           "seed = 7\npw = 07\nnew_pw = 0b\n",
                                           ".");
    PasswordStore store;
    RunOutput r = run_scenario(s, store);
    const GroupParams& params = preset_tiny();
    CHECK(ChangMsg1::parse(r.transcript.delivered(1), params).to_bytes() ==
          r.transcript.delivered(1));
    CHECK(ChangMsg2::parse(r.transcript.delivered(2), params).to_bytes() ==
          r.transcript.delivered(2));
    CHECK(ChangMsg3::parse(r.transcript.delivered(3), params).to_bytes() ==
          r.transcript.delivered(3));
}

TEST_CASE("expectation matching feeds the exit-code contract") {
    TempDir tmp;
    write_text(tmp.path / "dict.txt", tiny_dict_text());
    Scenario s = parse_scenario_text(kProposedScn + "attack = dos\nattack.c = 05\n"
                                                    "expect.attack_success = true\n",
                                     tmp.path);
    PasswordStore store;
    RunOutput r = run_scenario(s, store);
    CHECK_FALSE(r.report.matches_expectations(s)); // the attack fails by design
    s.expect_attack_success = false;
    CHECK(r.report.matches_expectations(s));
}

TEST_CASE("preset registry resolves built-ins and loads new groups from files") {
    CHECK(&resolve_preset("tiny") == &preset_tiny());
    CHECK_THROWS_AS(resolve_preset("absent"), Error);

    TempDir tmp;
    // a second name with the desk parameters
    write_text(tmp.path / "presets.conf", "desk2.p = fffffffffffffa43\n"
                                          "desk2.q = 7ffffffffffffd21\n"
                                          "desk2.g = 4\n");
    load_presets_file(tmp.path / "presets.conf");
    const GroupParams& desk2 = resolve_preset("desk2");
    CHECK(desk2.p == preset_desk().p);
    CHECK(desk2.byte_len == 8);

    // redefining a built-in with identical parameters is accepted
    write_text(tmp.path / "same.conf", "tiny.p = 17\ntiny.q = b\ntiny.g = 4\n");
    CHECK_NOTHROW(load_presets_file(tmp.path / "same.conf"));
    // conflicting parameters are not
    write_text(tmp.path / "clash.conf", "tiny.p = 17\ntiny.q = b\ntiny.g = 2\n");
    CHECK_THROWS_AS(load_presets_file(tmp.path / "clash.conf"), Error);
    // incomplete triple
    write_text(tmp.path / "short.conf", "x.p = 17\n");
    CHECK_THROWS_AS(load_presets_file(tmp.path / "short.conf"), Error);
}

TEST_CASE("the shipped presets file matches the built-ins") {
    CHECK_NOTHROW(load_presets_file("testdata/presets.conf"));
}

TEST_CASE("golden vectors verify from the repository testdata") {
    const auto checks = verify_golden("testdata");
    for (const GoldenCheck& c : checks) {
        INFO(c.name, ": ", c.detail);
        CHECK(c.ok);
    }
}

#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <sys/wait.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <string>

// Exit-code contract of the pwlab binary: 0 success, 1 expectation/oracle
// mismatch, 2 config or I/O error. The binary path and the repo root come in
// through compile definitions; tests run with the repo root as cwd.

namespace {

int run_raw(const std::string& cmd) {
    const int status = std::system((cmd + " >/dev/null 2>&1").c_str());
    REQUIRE(status != -1);
    REQUIRE(WIFEXITED(status));
    return WEXITSTATUS(status);
}

int run_cli(const std::string& args) { return run_raw(std::string(PWLAB_CLI_PATH) + " " + args); }

} // namespace

TEST_CASE("dos against chang reports success and exits 0") {
    CHECK(run_cli("attack dos --target chang --preset tiny --seed 42 --c 05") == 0);
    CHECK(run_cli("attack dos --target chang --preset tiny --seed 42 --c 05 --expect-success") ==
          0);
    // the oracle contradicts the stated expectation -> 1
    CHECK(run_cli("attack dos --target chang --preset tiny --seed 42 --c 05 --expect-failure") ==
          1);
}

TEST_CASE("dos against the proposed protocol fails by design") {
    const std::string base =
        "attack dos --target proposed --preset tiny --seed 42 --c 05 --dict "
        "testdata/dicts/tiny16.txt";
    CHECK(run_cli(base + " --expect-failure") == 0);
    CHECK(run_cli(base + " --expect-success") == 1);
}

TEST_CASE("known-key and offline-guess run end to end") {
    CHECK(run_cli("attack known-key --target chang --preset desk --seed 7 --expect-success") == 0);
    CHECK(run_cli("attack known-key --target proposed --preset desk --seed 7 "
                  "--compromised key1 --dict testdata/dicts/desk256.txt --expect-failure") == 0);
    CHECK(run_cli("attack offline-guess --target chang --preset desk --seed 7 "
                  "--dict testdata/dicts/desk256.txt --expect-success") == 0);
    CHECK(run_cli("attack offline-guess --target proposed --preset desk --seed 7 "
                  "--dict testdata/dicts/desk256.txt --expect-failure") == 0);
}

TEST_CASE("config and io problems exit 2") {
    CHECK(run_cli("run no-such-scenario.scn") == 2);
    CHECK(run_cli("attack dos --target proposed --preset tiny --c 05") == 2); // no dictionary
    CHECK(run_cli("attack dos --target chang --preset nope --c 05") == 2);
    CHECK(run_cli("attack bogus-kind --target chang") == 2);
    CHECK(run_cli("bogus-subcommand") == 2);
}

TEST_CASE("scenario files run with expectations enforced") {
    CHECK(run_cli("run testdata/scenarios/chang-dos.scn") == 0);
    CHECK(run_cli("run testdata/scenarios/proposed-dos.scn") == 0);
}

TEST_CASE("sweep prints one line per run") {
    CHECK(run_cli("sweep --target proposed --preset tiny --seed 5 "
                  "--dict testdata/dicts/tiny16.txt --runs 3") == 0);
}

TEST_CASE("verify-golden passes on a pristine checkout") {
    CHECK(run_cli("verify-golden") == 0);
    CHECK(run_cli("verify-golden --testdata /nonexistent") == 1);
}

TEST_CASE("presets load from --presets and from PWLAB_PRESET_DIR") {
    namespace fs = std::filesystem;
    const fs::path dir = fs::temp_directory_path() / "pwlab-cli-presets";
    fs::create_directories(dir);
    {
        std::ofstream conf(dir / "presets.conf");
        conf << "cli-extra.p = fffffffffffffa43\n"
                "cli-extra.q = 7ffffffffffffd21\n"
                "cli-extra.g = 4\n";
    }
    const std::string args = "attack dos --target chang --preset cli-extra --seed 42 --c 05";
    CHECK(run_cli("--presets " + (dir / "presets.conf").string() + " " + args) == 0);
    CHECK(run_raw("env PWLAB_PRESET_DIR=" + dir.string() + " " + std::string(PWLAB_CLI_PATH) +
                  " " + args) == 0);
    CHECK(run_cli(args) == 2); // unknown preset without the config
    fs::remove_all(dir);
}

#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "oracle.hpp"
#include "pwlab/proposed.hpp"

using namespace pwlab;
using pwlab::test::modexp_oracle;

namespace {

const Password kPw = Password::from_hex_str("07");
const Password kNewPw = Password::from_hex_str("0b");
const Identity kIdA = Identity::from_text("alice");
const Identity kIdB = Identity::from_text("bob");

std::vector<Password> tiny_dictionary() {
    std::vector<Password> dict;
    for (int v = 1; v <= 16; ++v)
        dict.push_back(Password(Bytes{static_cast<uint8_t>(v)}));
    return dict;
}

} // namespace

TEST_CASE("step1 masks two distinct elements") {
    const GroupParams& params = preset_tiny();
    PropAlice alice(kPw, kNewPw, kIdA, kIdB, params);
    const PropMsg1 m1 = alice.step1(Exponent{3}, Exponent{7});
    CHECK(to_hex(m1.x1) == "15"); // R_A = 18
    CHECK(to_hex(m1.x2) == "03"); // R_B = 8, 0x08 ^ 0x0b

    // same password on both slots still yields distinct masks when R_A != R_B
    PropAlice same(kPw, kPw, kIdA, kIdB, params);
    const PropMsg1 m = same.step1(Exponent{3}, Exponent{7});
    CHECK(m.x1 != m.x2);
}

TEST_CASE("step2 recovers R_A, holds x2 opaque and tags Bob's view") {
    const GroupParams& params = preset_tiny();
    PropAlice alice(kPw, kNewPw, kIdA, kIdB, params);
    const PropMsg1 m1 = alice.step1(Exponent{3}, Exponent{7});

    PropBob bob(kPw, kIdA, kIdB, params);
    const auto m2 = bob.step2(m1, Exponent{5});
    REQUIRE(m2.has_value());
    CHECK(m2->r_c.value == 12);
    CHECK(bob.key1()->value.value == 3); // 18^5 mod 23
    CHECK_FALSE(bob.recovered_new_pw().has_value());
    CHECK(to_hex(m2->tag) ==
          "8b4100531ee7801d9807f52d2c0cfc596e1241bf82a492ddd938f8bef873bb83");
}

TEST_CASE("step2 outcome partition over every 1-byte stored password") {
    const GroupParams& params = preset_tiny();
    PropAlice alice(kPw, kNewPw, kIdA, kIdB, params);
    const PropMsg1 m1 = alice.step1(Exponent{3}, Exponent{7});

    int out_of_range = 0, subgroup_fail = 0, proceeded = 0;
    for (int b = 0; b < 256; ++b) {
        PropBob bob(Password(Bytes{static_cast<uint8_t>(b)}), kIdA, kIdB, params);
        const auto m2 = bob.step2(m1, Exponent{5});
        if (m2) {
            ++proceeded;
        } else if (*bob.failure() == Errc::OutOfRange) {
            ++out_of_range;
        } else {
            CHECK(*bob.failure() == Errc::SubgroupFail);
            ++subgroup_fail;
        }

        // oracle: recompute the partition directly
        const uint64_t v = 0x12 ^ 0x07 ^ static_cast<uint64_t>(b);
        if (v == 0 || v >= 23)
            CHECK_FALSE(m2.has_value());
        else if (modexp_oracle(v, 11, 23) != 1)
            CHECK_FALSE(m2.has_value());
        else
            CHECK(m2.has_value());
    }
    CHECK(proceeded + out_of_range + subgroup_fail == 256);
    CHECK(proceeded == 11);       // one unmasking per subgroup element
    CHECK(out_of_range == 256 - 22); // values 0 and 23..255
    CHECK(subgroup_fail == 11);
}

TEST_CASE("step3 verifies Bob's tag against x2 as sent, then confirms") {
    const GroupParams& params = preset_tiny();
    PropAlice alice(kPw, kNewPw, kIdA, kIdB, params);
    const PropMsg1 m1 = alice.step1(Exponent{3}, Exponent{7});
    PropBob bob(kPw, kIdA, kIdB, params);
    const auto m2 = bob.step2(m1, Exponent{5});

    SUBCASE("untampered run produces matching keys") {
        const auto m3 = alice.step3(*m2);
        REQUIRE(m3.has_value());
        CHECK(alice.key1()->value.value == 3);
        CHECK(alice.key2()->value.value == 16); // 12^7 mod 23
        CHECK(alice.phase() == PropAlicePhase::Done);
        CHECK(to_hex(m3->tag) ==
              "815fbab8c85ec54983fd389b88b44a4334e0e81b1db9a8c3c98f2ae019c874f3");
    }

    SUBCASE("flipped tag aborts") {
        PropMsg2 bad = *m2;
        bad.tag[0] ^= 0x01;
        CHECK_FALSE(alice.step3(bad).has_value());
        CHECK(alice.phase() == PropAlicePhase::Aborted);
        CHECK(*alice.failure() == Errc::TagMismatch);
        CHECK_FALSE(alice.key2().has_value()); // Key_2 only after verification
    }

    SUBCASE("identity R_C aborts as an invalid element") {
        PropMsg2 bad{make_element(1, params), m2->tag};
        CHECK_FALSE(alice.step3(bad).has_value());
        CHECK(alice.phase() == PropAlicePhase::Aborted);
        CHECK(*alice.failure() == Errc::InvalidElement);
    }
}

TEST_CASE("step4 finds the new password at its dictionary position") {
    const GroupParams& params = preset_tiny();
    PropAlice alice(kPw, kNewPw, kIdA, kIdB, params);
    const PropMsg1 m1 = alice.step1(Exponent{3}, Exponent{7});
    PropBob bob(kPw, kIdA, kIdB, params);
    const auto m2 = bob.step2(m1, Exponent{5});
    const auto m3 = alice.step3(*m2);
    REQUIRE(m3.has_value());

    const auto dict = tiny_dictionary();
    bob.step4(*m3, dict);
    CHECK(bob.phase() == PropBobPhase::Accepted);
    CHECK(bob.recovered_new_pw()->hex() == "0b");
    CHECK(bob.stored_password().hex() == "0b");
    CHECK(bob.key2()->value.value == 16); // 8^5 mod 23 = Alice's Key_2
    CHECK(bob.iterations_used() == 11);   // 0x0b sits at index 10

    // step-4 soundness, re-assertable after the fact: the accepted keys
    // reproduce the received confirmation tag
    CHECK(hash_H({encode_element(bob.key1()->value), encode_element(bob.key2()->value),
                  encode_element(*bob.r_c()), kIdA.bytes(), kIdB.bytes()}) == m3->tag);
}

TEST_CASE("step4 exhausts on garbage and on a dictionary missing the password") {
    const GroupParams& params = preset_tiny();
    const auto dict = tiny_dictionary();

    SUBCASE("random msg3") {
        PropAlice alice(kPw, kNewPw, kIdA, kIdB, params);
        const PropMsg1 m1 = alice.step1(Exponent{3}, Exponent{7});
        PropBob bob(kPw, kIdA, kIdB, params);
        const auto m2 = bob.step2(m1, Exponent{5});
        REQUIRE(m2.has_value());
        Digest garbage{};
        garbage.fill(0xa5);
        bob.step4(PropMsg3{garbage}, dict);
        CHECK(bob.phase() == PropBobPhase::Rejected);
        CHECK(bob.iterations_used() == dict.size());
        CHECK(bob.stored_password().hex() == "07"); // untouched
    }

    SUBCASE("new password outside the dictionary") {
        const Password outside = Password::from_hex_str("12"); // 0x12 > 0x10
        PropAlice alice(kPw, outside, kIdA, kIdB, params);
        const PropMsg1 m1 = alice.step1(Exponent{3}, Exponent{7});
        PropBob bob(kPw, kIdA, kIdB, params);
        const auto m2 = bob.step2(m1, Exponent{5});
        const auto m3 = alice.step3(*m2);
        REQUIRE(m3.has_value());
        bob.step4(*m3, dict);
        CHECK(bob.phase() == PropBobPhase::Rejected);
    }

    SUBCASE("iteration cap rejects early") {
        PropAlice alice(kPw, kNewPw, kIdA, kIdB, params);
        const PropMsg1 m1 = alice.step1(Exponent{3}, Exponent{7});
        PropBob bob(kPw, kIdA, kIdB, params);
        const auto m2 = bob.step2(m1, Exponent{5});
        const auto m3 = alice.step3(*m2);
        bob.step4(*m3, dict, 4); // cap below the match position
        CHECK(bob.phase() == PropBobPhase::Rejected);
        CHECK(bob.iterations_used() == 4);
    }
}

TEST_CASE("honest completion: exhaustive exponents, sampled passwords") {
    const GroupParams& params = preset_tiny();
    const auto dict = tiny_dictionary();
    const std::vector<std::pair<size_t, size_t>> pw_idx = {{6, 10}, {0, 15}, {3, 3}};

    for (const auto& [pi, ni] : pw_idx) {
        const Password pw = dict[pi];
        const Password new_pw = dict[ni];
        for (uint64_t a = 1; a <= 10; ++a) {
            for (uint64_t b = 1; b <= 10; ++b) {
                for (uint64_t c = 1; c <= 10; ++c) {
                    PropAlice alice(pw, new_pw, kIdA, kIdB, params);
                    PropBob bob(pw, kIdA, kIdB, params);
                    const PropMsg1 m1 = alice.step1(Exponent{a}, Exponent{b});
                    const auto m2 = bob.step2(m1, Exponent{c});
                    REQUIRE(m2.has_value());
                    const auto m3 = alice.step3(*m2);
                    REQUIRE(m3.has_value());
                    bob.step4(*m3, dict);

                    REQUIRE(alice.phase() == PropAlicePhase::Done);
                    REQUIRE(bob.phase() == PropBobPhase::Accepted);
                    CHECK(*alice.key1() == *bob.key1());
                    CHECK(*alice.key2() == *bob.key2());
                    CHECK(same_secret(*bob.recovered_new_pw(), new_pw));
                    CHECK(bob.iterations_used() == ni + 1);
                }
            }
        }
    }
}

TEST_CASE("single-bit tampering never yields acceptance on the desk group") {
    const GroupParams& params = preset_desk();
    std::vector<Password> dict;
    for (int v = 0; v < 32; ++v)
        dict.push_back(Password(Bytes{static_cast<uint8_t>(v * 7 + 1)}));
    const Password pw = dict[2], new_pw = dict[9];

    DetRng rng(31337);
    for (int trial = 0; trial < 30; ++trial) {
        const Exponent a = random_exponent(params, rng);
        const Exponent b = random_exponent(params, rng);
        const Exponent c = random_exponent(params, rng);
        const int which = trial % 3;

        PropAlice alice(pw, new_pw, kIdA, kIdB, params);
        PropBob bob(pw, kIdA, kIdB, params);

        PropMsg1 m1 = alice.step1(a, b);
        if (which == 0) {
            Bytes w = m1.to_bytes();
            w[rng.next_u64() % w.size()] ^= static_cast<uint8_t>(1u << (rng.next_u64() % 8));
            m1 = PropMsg1::parse(w, params);
        }
        auto m2 = bob.step2(m1, c);
        if (!m2) {
            CHECK(bob.phase() == PropBobPhase::Rejected);
            continue;
        }
        if (which == 1) {
            Bytes w = m2->to_bytes();
            w[rng.next_u64() % w.size()] ^= static_cast<uint8_t>(1u << (rng.next_u64() % 8));
            try {
                m2 = PropMsg2::parse(w, params);
            } catch (const Error&) {
                continue; // flipped r_c out of range; Alice would drop it
            }
        }
        auto m3 = alice.step3(*m2);
        if (!m3) {
            CHECK(alice.phase() == PropAlicePhase::Aborted);
            continue;
        }
        if (which == 2) {
            Bytes w = m3->to_bytes();
            w[rng.next_u64() % w.size()] ^= static_cast<uint8_t>(1u << (rng.next_u64() % 8));
            m3 = PropMsg3::parse(w, params);
        }
        bob.step4(*m3, dict);
        // a tampered run that got this far must still never be accepted
        CHECK(bob.phase() != PropBobPhase::Accepted);
    }
}

TEST_CASE("message wire forms round-trip") {
    const GroupParams& params = preset_tiny();
    PropAlice alice(kPw, kNewPw, kIdA, kIdB, params);
    const PropMsg1 m1 = alice.step1(Exponent{3}, Exponent{7});
    PropBob bob(kPw, kIdA, kIdB, params);
    const auto m2 = bob.step2(m1, Exponent{5});
    const auto m3 = alice.step3(*m2);

    CHECK(PropMsg1::parse(m1.to_bytes(), params).x2 == m1.x2);
    CHECK(PropMsg2::parse(m2->to_bytes(), params).r_c.value == 12);
    CHECK(PropMsg3::parse(m3->to_bytes(), params).tag == m3->tag);
    CHECK_THROWS_AS(PropMsg3::parse(from_hex("00"), params), Error);
}

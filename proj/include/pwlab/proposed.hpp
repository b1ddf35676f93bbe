#pragma once

#include <optional>
#include <vector>

#include "pwlab/codec.hpp"
#include "pwlab/error.hpp"
#include "pwlab/group.hpp"

namespace pwlab {

// The replacement password-change protocol. Alice commits to R_A and R_B in
// one message; Bob can only open the new-password mask in Step 4, by
// searching a candidate list against the key-confirmation tag.

struct PropMsg1 {
    Bytes x1; // R_A masked by pw
    Bytes x2; // R_B masked by new_pw

    Bytes to_bytes() const;
    static PropMsg1 parse(const Bytes& wire, const GroupParams& params);
};

struct PropMsg2 {
    GroupElement r_c;
    Digest tag; // H(Key_1, R_A, x2, ID_B, ID_A)

    Bytes to_bytes() const;
    static PropMsg2 parse(const Bytes& wire, const GroupParams& params);
};

struct PropMsg3 {
    Digest tag; // H(Key_1, Key_2, R_C, ID_A, ID_B)

    Bytes to_bytes() const;
    static PropMsg3 parse(const Bytes& wire, const GroupParams& params);
};

enum class PropAlicePhase { Init, Sent1, Done, Aborted };
enum class PropBobPhase { Init, Sent2, Accepted, Rejected };

/// Candidate-search bound for Step 4; "finished in a polynomial time" is
/// enforced as an explicit iteration cap.
constexpr size_t kStep4IterationCap = size_t(1) << 20;

class PropAlice {
public:
    PropAlice(Password pw, Password new_pw, Identity id_a, Identity id_b,
              const GroupParams& params);

    /// Step 1: R_A = g^a, R_B = g^b, send (R_A ^ pw, R_B ^ new_pw).
    PropMsg1 step1(const Exponent& a, const Exponent& b);

    /// Step 3: Key_1 = R_C^a; verify the tag against the x2 bytes as sent.
    /// On mismatch the session aborts and no msg3 exists. On success
    /// Key_2 = R_C^b and the confirmation tag goes out.
    std::optional<PropMsg3> step3(const PropMsg2& msg2);

    PropAlicePhase phase() const { return phase_; }
    std::optional<Errc> failure() const { return failure_; }
    const Password& new_pw() const { return new_pw_; }
    const std::optional<SharedKey>& key1() const { return key1_; }
    const std::optional<SharedKey>& key2() const { return key2_; }
    const std::optional<GroupElement>& r_a() const { return r_a_; }
    const std::optional<GroupElement>& r_b() const { return r_b_; }

private:
    const GroupParams* params_;
    Password pw_;
    Password new_pw_;
    Identity id_a_;
    Identity id_b_;
    std::optional<Exponent> a_;
    std::optional<Exponent> b_;
    std::optional<GroupElement> r_a_;
    std::optional<GroupElement> r_b_;
    Bytes x2_sent_;
    std::optional<SharedKey> key1_;
    std::optional<SharedKey> key2_;
    std::optional<Errc> failure_;
    PropAlicePhase phase_ = PropAlicePhase::Init;
};

class PropBob {
public:
    PropBob(Password stored_pw, Identity id_a, Identity id_b, const GroupParams& params);

    /// Step 2: unmask R_A with the stored password, hold x2 opaque, reply
    /// (R_C, H(Key_1, R_A, x2, ID_B, ID_A)). Rejects on OutOfRange or
    /// SubgroupFail of the recovered R_A.
    std::optional<PropMsg2> step2(const PropMsg1& msg1, const Exponent& c);

    /// Step 4: walk the dictionary in order; for each candidate open x2,
    /// skip candidates whose element fails decode or subgroup validation,
    /// and accept the first whose Key_2' reproduces the received tag.
    /// Exhaustion (or the iteration cap) rejects; a rejected session leaves
    /// the stored password untouched.
    void step4(const PropMsg3& msg3, const std::vector<Password>& dictionary,
               size_t iteration_cap = kStep4IterationCap);

    PropBobPhase phase() const { return phase_; }
    std::optional<Errc> failure() const { return failure_; }
    const Password& stored_password() const { return stored_pw_; }
    const std::optional<Password>& recovered_new_pw() const { return recovered_new_pw_; }
    const std::optional<SharedKey>& key1() const { return key1_; }
    const std::optional<SharedKey>& key2() const { return key2_; }
    const std::optional<GroupElement>& r_c() const { return r_c_; }

    /// Dictionary entries consumed by step4: 1 + index of the accepted
    /// candidate, or min(|dictionary|, cap) on rejection.
    size_t iterations_used() const { return iterations_used_; }
    /// Candidates that survived decode and reached the tag comparison.
    size_t comparisons_made() const { return comparisons_made_; }

private:
    const GroupParams* params_;
    Password stored_pw_;
    Identity id_a_;
    Identity id_b_;
    std::optional<Exponent> c_;
    std::optional<GroupElement> r_a_recovered_;
    std::optional<GroupElement> r_c_;
    std::optional<SharedKey> key1_;
    std::optional<SharedKey> key2_;
    Bytes x2_held_;
    std::optional<Password> recovered_new_pw_;
    size_t iterations_used_ = 0;
    size_t comparisons_made_ = 0;
    std::optional<Errc> failure_;
    PropBobPhase phase_ = PropBobPhase::Init;
};

} // namespace pwlab

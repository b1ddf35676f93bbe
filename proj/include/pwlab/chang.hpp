#pragma once

#include <optional>

#include "pwlab/codec.hpp"
#include "pwlab/error.hpp"
#include "pwlab/group.hpp"

namespace pwlab {

// Chang et al.'s three-message password-change protocol, preserved with all
// of its published weaknesses: Alice never authenticates msg2 before
// answering, and every mask is a bare XOR of the secret. Do not fix anything
// here; the adversary module depends on the flaws being intact.

struct ChangMsg1 {
    Bytes x1; // R_A masked by pw, byte_len wide
    Bytes x2; // R_A masked by new_pw, byte_len wide

    Bytes to_bytes() const;
    static ChangMsg1 parse(const Bytes& wire, const GroupParams& params);
};

struct ChangMsg2 {
    GroupElement r_b;
    Digest tag; // H(K_B, R_A)

    Bytes to_bytes() const;
    static ChangMsg2 parse(const Bytes& wire, const GroupParams& params);
};

struct ChangMsg3 {
    Bytes masked_tag; // H(K_A, R_B) masked by new_pw, digest width

    Bytes to_bytes() const;
    static ChangMsg3 parse(const Bytes& wire, const GroupParams& params);
};

enum class ChangAlicePhase { Init, Sent1, Done };
enum class ChangBobPhase { Init, Sent2, Accepted, Rejected };

class ChangAlice {
public:
    ChangAlice(Password pw, Password new_pw, const GroupParams& params);

    /// Step 1: R_A = g^a, send (R_A ^ pw, R_A ^ new_pw).
    ChangMsg1 step1(const Exponent& a);

    /// Step 3: K_A = R_B^a, send H(K_A, R_B) ^ new_pw. The protocol gives
    /// Alice no check of msg2's tag, and none is performed. Returns nullopt
    /// (failure() = InvalidElement) when R_B is out of range or outside the
    /// subgroup; phase stays Sent1.
    std::optional<ChangMsg3> step3(const ChangMsg2& msg2);

    ChangAlicePhase phase() const { return phase_; }
    std::optional<Errc> failure() const { return failure_; }
    const Password& new_pw() const { return new_pw_; }
    const std::optional<SharedKey>& key() const { return k_a_; }
    const std::optional<GroupElement>& r_a() const { return r_a_; }

private:
    const GroupParams* params_;
    Password pw_;
    Password new_pw_;
    std::optional<Exponent> a_;
    std::optional<GroupElement> r_a_;
    std::optional<SharedKey> k_a_;
    std::optional<Errc> failure_;
    ChangAlicePhase phase_ = ChangAlicePhase::Init;
};

class ChangBob {
public:
    ChangBob(Password stored_pw, const GroupParams& params);

    /// Step 2: unmask R_A and new_pw with the stored password, compute
    /// K_B = R_A^b and reply (R_B, H(K_B, R_A)). Returns nullopt with phase
    /// Rejected when the recovered R_A fails to decode (OutOfRange) or is
    /// not a subgroup member (SubgroupFail).
    std::optional<ChangMsg2> step2(const ChangMsg1& msg1, const Exponent& b);

    /// Step 3 handling: unmask the tag with the recovered new password and
    /// accept iff it equals H(K_B, R_B). Acceptance installs the recovered
    /// password; rejection leaves the stored one untouched.
    void finish(const ChangMsg3& msg3);

    ChangBobPhase phase() const { return phase_; }
    std::optional<Errc> failure() const { return failure_; }
    const Password& stored_password() const { return stored_pw_; }
    const std::optional<Password>& recovered_new_pw() const { return new_pw_recovered_; }
    const std::optional<SharedKey>& key() const { return k_b_; }

private:
    const GroupParams* params_;
    Password stored_pw_;
    std::optional<Exponent> b_;
    std::optional<GroupElement> r_a_recovered_;
    std::optional<GroupElement> r_b_;
    std::optional<Password> new_pw_recovered_;
    std::optional<SharedKey> k_b_;
    std::optional<Errc> failure_;
    ChangBobPhase phase_ = ChangBobPhase::Init;
};

} // namespace pwlab

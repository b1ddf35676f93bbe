#include "pwlab/chang.hpp"

#include <algorithm>
#include <utility>

namespace pwlab {

namespace {

void require_phase(bool ok, const char* what) {
    if (!ok)
        throw Error(Errc::ConfigError, what);
}

} // namespace

// ---- messages -------------------------------------------------------------

Bytes ChangMsg1::to_bytes() const {
    Bytes out = x1;
    out.insert(out.end(), x2.begin(), x2.end());
    return out;
}

ChangMsg1 ChangMsg1::parse(const Bytes& wire, const GroupParams& params) {
    const size_t n = params.byte_len;
    if (wire.size() != 2 * n)
        throw Error(Errc::OutOfRange, "chang msg1 must be 2*byte_len bytes");
    return ChangMsg1{Bytes(wire.begin(), wire.begin() + n), Bytes(wire.begin() + n, wire.end())};
}

Bytes ChangMsg2::to_bytes() const {
    Bytes out = encode_element(r_b);
    out.insert(out.end(), tag.begin(), tag.end());
    return out;
}

ChangMsg2 ChangMsg2::parse(const Bytes& wire, const GroupParams& params) {
    const size_t n = params.byte_len;
    if (wire.size() != n + kDigestLen)
        throw Error(Errc::OutOfRange, "chang msg2 must be byte_len+32 bytes");
    GroupElement r_b = decode_element(Bytes(wire.begin(), wire.begin() + n), params);
    return ChangMsg2{r_b, digest_from_bytes(Bytes(wire.begin() + n, wire.end()))};
}

Bytes ChangMsg3::to_bytes() const { return masked_tag; }

ChangMsg3 ChangMsg3::parse(const Bytes& wire, const GroupParams&) {
    if (wire.size() != kDigestLen)
        throw Error(Errc::OutOfRange, "chang msg3 must be 32 bytes");
    return ChangMsg3{wire};
}

// ---- Alice ----------------------------------------------------------------

ChangAlice::ChangAlice(Password pw, Password new_pw, const GroupParams& params)
    : params_(&params), pw_(std::move(pw)), new_pw_(std::move(new_pw)) {}

ChangMsg1 ChangAlice::step1(const Exponent& a) {
    require_phase(phase_ == ChangAlicePhase::Init, "chang step1 requires phase Init");
    a_ = a;
    r_a_ = generator_power(*params_, a);
    const Bytes ra_bytes = encode_element(*r_a_);
    ChangMsg1 msg{mask(ra_bytes, pw_), mask(ra_bytes, new_pw_)};
    phase_ = ChangAlicePhase::Sent1;
    return msg;
}

std::optional<ChangMsg3> ChangAlice::step3(const ChangMsg2& msg2) {
    require_phase(phase_ == ChangAlicePhase::Sent1, "chang step3 requires phase Sent1");
    // received elements must lie in the subgroup and not be the fixed point 1
    if (msg2.r_b.value == 1 || !validate_subgroup(msg2.r_b)) {
        failure_ = Errc::InvalidElement;
        return std::nullopt;
    }
    GroupElement r_b{msg2.r_b.value, params_, true};
    k_a_ = dh_key(r_b, *a_);
    // The protocol gives Alice no verification of msg2.tag; faithfully none
    // happens here.
    const Digest tag = hash_H({encode_element(k_a_->value), encode_element(r_b)});
    ChangMsg3 msg{mask(digest_to_bytes(tag), new_pw_)};
    phase_ = ChangAlicePhase::Done;
    return msg;
}

// ---- Bob ------------------------------------------------------------------

ChangBob::ChangBob(Password stored_pw, const GroupParams& params)
    : params_(&params), stored_pw_(std::move(stored_pw)) {}

std::optional<ChangMsg2> ChangBob::step2(const ChangMsg1& msg1, const Exponent& b) {
    require_phase(phase_ == ChangBobPhase::Init, "chang step2 requires phase Init");
    b_ = b;

    // R_A = (R_A ^ pw) ^ pw
    const Bytes ra_bytes = mask(msg1.x1, stored_pw_);
    auto r_a = try_decode_element(ra_bytes, *params_);
    if (!r_a) {
        failure_ = Errc::OutOfRange;
        phase_ = ChangBobPhase::Rejected;
        return std::nullopt;
    }
    if (!validate_subgroup(*r_a)) {
        failure_ = Errc::SubgroupFail;
        phase_ = ChangBobPhase::Rejected;
        return std::nullopt;
    }
    r_a_recovered_ = GroupElement{r_a->value, params_, true};

    // new_pw = R_A ^ (R_A ^ new_pw); the recovered secret is byte_len wide
    new_pw_recovered_ = Password::recovered(xor_bytes(ra_bytes, msg1.x2));

    r_b_ = generator_power(*params_, b);
    k_b_ = dh_key(*r_a_recovered_, b);
    const Digest tag = hash_H({encode_element(k_b_->value), encode_element(*r_a_recovered_)});
    phase_ = ChangBobPhase::Sent2;
    return ChangMsg2{*r_b_, tag};
}

void ChangBob::finish(const ChangMsg3& msg3) {
    require_phase(phase_ == ChangBobPhase::Sent2, "chang finish requires phase Sent2");
    const Bytes tag = mask(msg3.masked_tag, *new_pw_recovered_);
    const Digest expected = hash_H({encode_element(k_b_->value), encode_element(*r_b_)});
    if (std::equal(tag.begin(), tag.end(), expected.begin(), expected.end())) {
        stored_pw_ = *new_pw_recovered_;
        phase_ = ChangBobPhase::Accepted;
    } else {
        phase_ = ChangBobPhase::Rejected;
    }
}

} // namespace pwlab

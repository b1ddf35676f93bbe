#include "pwlab/proposed.hpp"

#include <utility>

namespace pwlab {

namespace {

void require_phase(bool ok, const char* what) {
    if (!ok)
        throw Error(Errc::ConfigError, what);
}

} // namespace

// ---- messages -------------------------------------------------------------

Bytes PropMsg1::to_bytes() const {
    Bytes out = x1;
    out.insert(out.end(), x2.begin(), x2.end());
    return out;
}

PropMsg1 PropMsg1::parse(const Bytes& wire, const GroupParams& params) {
    const size_t n = params.byte_len;
    if (wire.size() != 2 * n)
        throw Error(Errc::OutOfRange, "msg1 must be 2*byte_len bytes");
    return PropMsg1{Bytes(wire.begin(), wire.begin() + n), Bytes(wire.begin() + n, wire.end())};
}

Bytes PropMsg2::to_bytes() const {
    Bytes out = encode_element(r_c);
    out.insert(out.end(), tag.begin(), tag.end());
    return out;
}

PropMsg2 PropMsg2::parse(const Bytes& wire, const GroupParams& params) {
    const size_t n = params.byte_len;
    if (wire.size() != n + kDigestLen)
        throw Error(Errc::OutOfRange, "msg2 must be byte_len+32 bytes");
    GroupElement r_c = decode_element(Bytes(wire.begin(), wire.begin() + n), params);
    return PropMsg2{r_c, digest_from_bytes(Bytes(wire.begin() + n, wire.end()))};
}

Bytes PropMsg3::to_bytes() const { return digest_to_bytes(tag); }

PropMsg3 PropMsg3::parse(const Bytes& wire, const GroupParams&) {
    return PropMsg3{digest_from_bytes(wire)};
}

// ---- Alice ----------------------------------------------------------------

PropAlice::PropAlice(Password pw, Password new_pw, Identity id_a, Identity id_b,
                     const GroupParams& params)
    : params_(&params), pw_(std::move(pw)), new_pw_(std::move(new_pw)), id_a_(std::move(id_a)),
      id_b_(std::move(id_b)) {}

PropMsg1 PropAlice::step1(const Exponent& a, const Exponent& b) {
    require_phase(phase_ == PropAlicePhase::Init, "step1 requires phase Init");
    a_ = a;
    b_ = b;
    r_a_ = generator_power(*params_, a);
    r_b_ = generator_power(*params_, b);
    PropMsg1 msg{mask(encode_element(*r_a_), pw_), mask(encode_element(*r_b_), new_pw_)};
    x2_sent_ = msg.x2;
    phase_ = PropAlicePhase::Sent1;
    return msg;
}

std::optional<PropMsg3> PropAlice::step3(const PropMsg2& msg2) {
    require_phase(phase_ == PropAlicePhase::Sent1, "step3 requires phase Sent1");
    // received elements must lie in the subgroup and not be the fixed point 1
    if (msg2.r_c.value == 1 || !validate_subgroup(msg2.r_c)) {
        failure_ = Errc::InvalidElement;
        phase_ = PropAlicePhase::Aborted;
        return std::nullopt;
    }
    GroupElement r_c{msg2.r_c.value, params_, true};
    key1_ = dh_key(r_c, *a_);

    // Expected tag is rebuilt from Alice's own view, x2 exactly as sent.
    const Digest expected = hash_H({encode_element(key1_->value), encode_element(*r_a_),
                                    x2_sent_, id_b_.bytes(), id_a_.bytes()});
    if (expected != msg2.tag) {
        failure_ = Errc::TagMismatch;
        key1_.reset();
        phase_ = PropAlicePhase::Aborted;
        return std::nullopt;
    }

    key2_ = dh_key(r_c, *b_);
    const Digest tag = hash_H({encode_element(key1_->value), encode_element(key2_->value),
                               encode_element(r_c), id_a_.bytes(), id_b_.bytes()});
    phase_ = PropAlicePhase::Done;
    return PropMsg3{tag};
}

// ---- Bob ------------------------------------------------------------------

PropBob::PropBob(Password stored_pw, Identity id_a, Identity id_b, const GroupParams& params)
    : params_(&params), stored_pw_(std::move(stored_pw)), id_a_(std::move(id_a)),
      id_b_(std::move(id_b)) {}

std::optional<PropMsg2> PropBob::step2(const PropMsg1& msg1, const Exponent& c) {
    require_phase(phase_ == PropBobPhase::Init, "step2 requires phase Init");
    c_ = c;

    const Bytes ra_bytes = mask(msg1.x1, stored_pw_);
    auto r_a = try_decode_element(ra_bytes, *params_);
    if (!r_a) {
        failure_ = Errc::OutOfRange;
        phase_ = PropBobPhase::Rejected;
        return std::nullopt;
    }
    if (!validate_subgroup(*r_a)) {
        failure_ = Errc::SubgroupFail;
        phase_ = PropBobPhase::Rejected;
        return std::nullopt;
    }
    r_a_recovered_ = GroupElement{r_a->value, params_, true};

    // x2 stays opaque until Step 4; Bob does not know new_pw here.
    x2_held_ = msg1.x2;

    r_c_ = generator_power(*params_, c);
    key1_ = dh_key(*r_a_recovered_, c);
    const Digest tag = hash_H({encode_element(key1_->value), encode_element(*r_a_recovered_),
                               x2_held_, id_b_.bytes(), id_a_.bytes()});
    phase_ = PropBobPhase::Sent2;
    return PropMsg2{*r_c_, tag};
}

void PropBob::step4(const PropMsg3& msg3, const std::vector<Password>& dictionary,
                    size_t iteration_cap) {
    require_phase(phase_ == PropBobPhase::Sent2, "step4 requires phase Sent2");

    for (const Password& candidate : dictionary) {
        if (iterations_used_ >= iteration_cap)
            break;
        ++iterations_used_;

        const Bytes rb_bytes = mask(x2_held_, candidate);
        auto r_b = try_decode_element(rb_bytes, *params_);
        if (!r_b || !validate_subgroup(*r_b))
            continue; // a wrong guess producing garbage is the common case

        const SharedKey key2{modexp(GroupElement{r_b->value, params_, true}, *c_)};
        ++comparisons_made_;
        const Digest tag = hash_H({encode_element(key1_->value), encode_element(key2.value),
                                   encode_element(*r_c_), id_a_.bytes(), id_b_.bytes()});
        if (tag == msg3.tag) {
            // stored password and phase move together
            key2_ = key2;
            recovered_new_pw_ = candidate;
            stored_pw_ = candidate;
            phase_ = PropBobPhase::Accepted;
            return;
        }
    }
    phase_ = PropBobPhase::Rejected;
}

} // namespace pwlab

#include "pwlab/session.hpp"

#include <utility>

#include "pwlab/error.hpp"

namespace pwlab {

namespace {

std::string_view chang_alice_phase_name(ChangAlicePhase p) {
    switch (p) {
    case ChangAlicePhase::Init: return "Init";
    case ChangAlicePhase::Sent1: return "Sent1";
    case ChangAlicePhase::Done: return "Done";
    }
    return "?";
}

std::string_view chang_bob_phase_name(ChangBobPhase p) {
    switch (p) {
    case ChangBobPhase::Init: return "Init";
    case ChangBobPhase::Sent2: return "Sent2";
    case ChangBobPhase::Accepted: return "Accepted";
    case ChangBobPhase::Rejected: return "Rejected";
    }
    return "?";
}

std::string_view prop_alice_phase_name(PropAlicePhase p) {
    switch (p) {
    case PropAlicePhase::Init: return "Init";
    case PropAlicePhase::Sent1: return "Sent1";
    case PropAlicePhase::Done: return "Done";
    case PropAlicePhase::Aborted: return "Aborted";
    }
    return "?";
}

std::string_view prop_bob_phase_name(PropBobPhase p) {
    switch (p) {
    case PropBobPhase::Init: return "Init";
    case PropBobPhase::Sent2: return "Sent2";
    case PropBobPhase::Accepted: return "Accepted";
    case PropBobPhase::Rejected: return "Rejected";
    }
    return "?";
}

} // namespace

// ---- Chang Alice ------------------------------------------------------------

ChangAliceDriver::ChangAliceDriver(Password pw, Password new_pw, const GroupParams& params,
                                   DetRng rng)
    : params_(&params), alice_(std::move(pw), std::move(new_pw), params), rng_(rng) {}

std::optional<Bytes> ChangAliceDriver::open() {
    const Exponent a = random_exponent(*params_, rng_);
    return alice_.step1(a).to_bytes();
}

std::optional<Bytes> ChangAliceDriver::on_message(const Bytes& wire) {
    if (alice_.phase() != ChangAlicePhase::Sent1 || finished())
        return std::nullopt;
    std::optional<ChangMsg2> msg2;
    try {
        msg2 = ChangMsg2::parse(wire, *params_);
    } catch (const Error&) {
        parse_failed_ = true;
        return std::nullopt;
    }
    auto msg3 = alice_.step3(*msg2);
    if (!msg3)
        return std::nullopt;
    return msg3->to_bytes();
}

bool ChangAliceDriver::finished() const {
    return alice_.phase() == ChangAlicePhase::Done || alice_.failure().has_value() ||
           parse_failed_;
}

PartyFacts ChangAliceDriver::facts() const {
    PartyFacts f;
    f.phase = std::string(chang_alice_phase_name(alice_.phase()));
    f.terminal = finished();
    f.accepted = alice_.phase() == ChangAlicePhase::Done;
    f.rejected = parse_failed_ || alice_.failure().has_value();
    f.intended_new_pw = alice_.new_pw();
    f.chang_key = alice_.key();
    return f;
}

// ---- Chang Bob --------------------------------------------------------------

ChangBobDriver::ChangBobDriver(Password stored_pw, const GroupParams& params, DetRng rng)
    : params_(&params), bob_(std::move(stored_pw), params), rng_(rng) {}

std::optional<Bytes> ChangBobDriver::on_message(const Bytes& wire) {
    try {
        if (bob_.phase() == ChangBobPhase::Init) {
            const Exponent b = random_exponent(*params_, rng_);
            auto msg2 = bob_.step2(ChangMsg1::parse(wire, *params_), b);
            if (!msg2)
                return std::nullopt;
            return msg2->to_bytes();
        }
        if (bob_.phase() == ChangBobPhase::Sent2) {
            bob_.finish(ChangMsg3::parse(wire, *params_));
            return std::nullopt;
        }
    } catch (const Error&) {
        parse_failed_ = true;
    }
    return std::nullopt;
}

bool ChangBobDriver::finished() const {
    return bob_.phase() == ChangBobPhase::Accepted || bob_.phase() == ChangBobPhase::Rejected ||
           parse_failed_;
}

PartyFacts ChangBobDriver::facts() const {
    PartyFacts f;
    f.phase = std::string(chang_bob_phase_name(bob_.phase()));
    f.terminal = finished();
    f.accepted = bob_.phase() == ChangBobPhase::Accepted;
    f.rejected = bob_.phase() == ChangBobPhase::Rejected || parse_failed_;
    f.stored_password = bob_.stored_password();
    f.chang_key = bob_.key();
    return f;
}

// ---- Proposed Alice ---------------------------------------------------------

PropAliceDriver::PropAliceDriver(Password pw, Password new_pw, Identity id_a, Identity id_b,
                                 const GroupParams& params, DetRng rng)
    : params_(&params),
      alice_(std::move(pw), std::move(new_pw), std::move(id_a), std::move(id_b), params),
      rng_(rng) {}

std::optional<Bytes> PropAliceDriver::open() {
    const Exponent a = random_exponent(*params_, rng_);
    const Exponent b = random_exponent(*params_, rng_);
    return alice_.step1(a, b).to_bytes();
}

std::optional<Bytes> PropAliceDriver::on_message(const Bytes& wire) {
    if (alice_.phase() != PropAlicePhase::Sent1)
        return std::nullopt;
    std::optional<PropMsg2> msg2;
    try {
        msg2 = PropMsg2::parse(wire, *params_);
    } catch (const Error&) {
        parse_failed_ = true;
        return std::nullopt;
    }
    auto msg3 = alice_.step3(*msg2);
    if (!msg3)
        return std::nullopt;
    return msg3->to_bytes();
}

bool PropAliceDriver::finished() const {
    return alice_.phase() == PropAlicePhase::Done || alice_.phase() == PropAlicePhase::Aborted ||
           parse_failed_;
}

PartyFacts PropAliceDriver::facts() const {
    PartyFacts f;
    f.phase = std::string(prop_alice_phase_name(alice_.phase()));
    f.terminal = finished();
    f.accepted = alice_.phase() == PropAlicePhase::Done;
    f.rejected = alice_.phase() == PropAlicePhase::Aborted || parse_failed_;
    f.intended_new_pw = alice_.new_pw();
    f.key1 = alice_.key1();
    f.key2 = alice_.key2();
    return f;
}

// ---- Proposed Bob -----------------------------------------------------------

PropBobDriver::PropBobDriver(Password stored_pw, Identity id_a, Identity id_b,
                             const GroupParams& params, DetRng rng,
                             std::vector<Password> dictionary)
    : params_(&params), bob_(std::move(stored_pw), std::move(id_a), std::move(id_b), params),
      rng_(rng), dictionary_(std::move(dictionary)) {}

std::optional<Bytes> PropBobDriver::on_message(const Bytes& wire) {
    try {
        if (bob_.phase() == PropBobPhase::Init) {
            const Exponent c = random_exponent(*params_, rng_);
            auto msg2 = bob_.step2(PropMsg1::parse(wire, *params_), c);
            if (!msg2)
                return std::nullopt;
            return msg2->to_bytes();
        }
        if (bob_.phase() == PropBobPhase::Sent2) {
            bob_.step4(PropMsg3::parse(wire, *params_), dictionary_);
            return std::nullopt;
        }
    } catch (const Error&) {
        parse_failed_ = true;
    }
    return std::nullopt;
}

bool PropBobDriver::finished() const {
    return bob_.phase() == PropBobPhase::Accepted || bob_.phase() == PropBobPhase::Rejected ||
           parse_failed_;
}

PartyFacts PropBobDriver::facts() const {
    PartyFacts f;
    f.phase = std::string(prop_bob_phase_name(bob_.phase()));
    f.terminal = finished();
    f.accepted = bob_.phase() == PropBobPhase::Accepted;
    f.rejected = bob_.phase() == PropBobPhase::Rejected || parse_failed_;
    f.stored_password = bob_.stored_password();
    f.key1 = bob_.key1();
    f.key2 = bob_.key2();
    f.iterations_used = bob_.iterations_used();
    return f;
}

// ---- factory ----------------------------------------------------------------

DriverPair make_drivers(ProtocolKind protocol, const Password& pw, const Password& new_pw,
                        const Password& bob_stored_pw, const Identity& id_a,
                        const Identity& id_b, const GroupParams& params, uint64_t seed,
                        const std::vector<Password>& dictionary) {
    DetRng base(seed);
    DriverPair pair;
    if (protocol == ProtocolKind::Chang) {
        pair.alice = std::make_unique<ChangAliceDriver>(pw, new_pw, params, base.fork("alice"));
        pair.bob = std::make_unique<ChangBobDriver>(bob_stored_pw, params, base.fork("bob"));
    } else {
        pair.alice = std::make_unique<PropAliceDriver>(pw, new_pw, id_a, id_b, params,
                                                       base.fork("alice"));
        pair.bob = std::make_unique<PropBobDriver>(bob_stored_pw, id_a, id_b, params,
                                                   base.fork("bob"), dictionary);
    }
    return pair;
}

} // namespace pwlab

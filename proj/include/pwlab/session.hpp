#pragma once

#include <memory>
#include <vector>

#include "pwlab/adversary.hpp"
#include "pwlab/chang.hpp"
#include "pwlab/proposed.hpp"
#include "pwlab/rng.hpp"

namespace pwlab {

// Byte-level drivers wrapping the protocol state machines, one per role.
// Exponents come from the driver's deterministic stream, so a (scenario,
// seed) pair replays the same session bit for bit.

class ChangAliceDriver : public SessionDriver {
public:
    ChangAliceDriver(Password pw, Password new_pw, const GroupParams& params, DetRng rng);

    std::optional<Bytes> open() override;
    std::optional<Bytes> on_message(const Bytes& wire) override;
    bool finished() const override;
    PartyFacts facts() const override;

    const ChangAlice& state() const { return alice_; }

private:
    const GroupParams* params_;
    ChangAlice alice_;
    DetRng rng_;
    bool parse_failed_ = false;
};

class ChangBobDriver : public SessionDriver {
public:
    ChangBobDriver(Password stored_pw, const GroupParams& params, DetRng rng);

    std::optional<Bytes> open() override { return std::nullopt; }
    std::optional<Bytes> on_message(const Bytes& wire) override;
    bool finished() const override;
    PartyFacts facts() const override;

    const ChangBob& state() const { return bob_; }

private:
    const GroupParams* params_;
    ChangBob bob_;
    DetRng rng_;
    bool parse_failed_ = false;
};

class PropAliceDriver : public SessionDriver {
public:
    PropAliceDriver(Password pw, Password new_pw, Identity id_a, Identity id_b,
                    const GroupParams& params, DetRng rng);

    std::optional<Bytes> open() override;
    std::optional<Bytes> on_message(const Bytes& wire) override;
    bool finished() const override;
    PartyFacts facts() const override;

    const PropAlice& state() const { return alice_; }

private:
    const GroupParams* params_;
    PropAlice alice_;
    DetRng rng_;
    bool parse_failed_ = false;
};

class PropBobDriver : public SessionDriver {
public:
    PropBobDriver(Password stored_pw, Identity id_a, Identity id_b, const GroupParams& params,
                  DetRng rng, std::vector<Password> dictionary);

    std::optional<Bytes> open() override { return std::nullopt; }
    std::optional<Bytes> on_message(const Bytes& wire) override;
    bool finished() const override;
    PartyFacts facts() const override;

    const PropBob& state() const { return bob_; }

private:
    const GroupParams* params_;
    PropBob bob_;
    DetRng rng_;
    std::vector<Password> dictionary_;
    bool parse_failed_ = false;
};

struct DriverPair {
    std::unique_ptr<SessionDriver> alice;
    std::unique_ptr<SessionDriver> bob;
};

/// Builds both role drivers for one session. Sub-streams are forked from the
/// seed per role, so party randomness is independent of channel behavior.
DriverPair make_drivers(ProtocolKind protocol, const Password& pw, const Password& new_pw,
                        const Password& bob_stored_pw, const Identity& id_a,
                        const Identity& id_b, const GroupParams& params, uint64_t seed,
                        const std::vector<Password>& dictionary);

} // namespace pwlab

#pragma once

#include <cstdint>
#include <map>
#include <memory>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "pwlab/codec.hpp"
#include "pwlab/group.hpp"

namespace pwlab {

enum class ProtocolKind { Chang, Proposed };
enum class Direction { AtoB, BtoA };
enum class ChannelAction { Delivered, Modified, Dropped, Injected };

std::string_view protocol_name(ProtocolKind p);
std::string_view direction_name(Direction d);
std::string_view action_name(ChannelAction a);

/// One observation on the wire. Modified events carry both the bytes that
/// were sent (original) and the bytes that arrived (payload); Dropped events
/// carry the suppressed bytes as payload.
struct ChannelEvent {
    uint32_t seq = 0;
    Direction direction = Direction::AtoB;
    Bytes payload;
    ChannelAction action = ChannelAction::Delivered;
    std::optional<Bytes> original;
};

/// Everything an eavesdropper sees in one session, replayable byte-exactly.
struct Transcript {
    ProtocolKind protocol = ProtocolKind::Chang;
    std::string preset;
    const GroupParams* params = nullptr;
    Identity id_a = Identity::from_text("alice");
    Identity id_b = Identity::from_text("bob");
    std::vector<ChannelEvent> events;
    bool complete = false;

    /// Wire bytes of message `seq` as the receiver saw them; throws
    /// Error(MissingMessage) when the message never arrived.
    const Bytes& delivered(uint32_t seq) const;
    const ChannelEvent* find(uint32_t seq) const;
};

struct TamperRule {
    enum class Kind { XorMask, Replace, Drop };
    Kind kind = Kind::Drop;
    size_t offset = 0; // XorMask only: byte offset the mask is applied at
    Bytes bytes;

    static TamperRule xor_at(size_t offset, Bytes mask);
    static TamperRule replace(Bytes bytes);
    static TamperRule drop();
};

/// Dolev-Yao channel program: rules rewrite a message in flight, injections
/// substitute a message the sender never produced (keyed the same way).
struct TamperPlan {
    std::map<std::pair<uint32_t, Direction>, TamperRule> rules;
    std::map<std::pair<uint32_t, Direction>, Bytes> injections;

    bool empty() const { return rules.empty() && injections.empty(); }
};

/// Terminal facts one party exposes for attack oracles: phases plus the
/// ground-truth secrets the oracle (never the attacker) may consult.
struct PartyFacts {
    std::string phase;
    bool terminal = false;
    bool accepted = false; // Bob: Accepted; Alice: Done
    bool rejected = false; // Rejected or Aborted
    std::optional<Password> stored_password;
    std::optional<Password> intended_new_pw;
    std::optional<SharedKey> chang_key;
    std::optional<SharedKey> key1;
    std::optional<SharedKey> key2;
    size_t iterations_used = 0;
};

/// One protocol role driven over byte-level messages.
class SessionDriver {
public:
    virtual ~SessionDriver() = default;

    /// Initiator's opening message; nullopt for responders.
    virtual std::optional<Bytes> open() = 0;

    /// Feeds one inbound message, returns the outbound reply if the role
    /// produces one. Malformed or rejected input yields nullopt and a
    /// terminal phase.
    virtual std::optional<Bytes> on_message(const Bytes& wire) = 0;

    virtual bool finished() const = 0;
    virtual PartyFacts facts() const = 0;
};

/// Runs one session through the tamper plan, recording every event. The
/// protocols are three-message exchanges; the loop ends when a side stops
/// speaking and no injection covers the gap.
Transcript mitm_channel(SessionDriver& alice, SessionDriver& bob, const TamperPlan& plan,
                        ProtocolKind protocol, const GroupParams& params,
                        std::string preset, Identity id_a, Identity id_b);

// ---------------------------------------------------------------------------
// Attacks. The attacker's toolkit is deliberately restricted to XOR,
// encode/decode, hash_H, exponentiation with known exponents, and equality;
// no discrete-log capability exists at any preset size.
// ---------------------------------------------------------------------------

/// Outcome of the offline guessing attack over one transcript.
struct GuessReport {
    size_t dictionary_size = 0;
    uint64_t total_pairs = 0;     // |dict|^2 ordered pairs
    uint64_t baseline_count = 0;  // pairs surviving decode-validity alone
    uint64_t survivor_count = 0;  // pairs surviving every applied filter
    std::vector<std::string> filters_applied;
    std::vector<std::pair<Password, Password>> candidates; // may be capped
    bool candidates_truncated = false;

    double reduction_ratio() const;   // survivors / total
    double ratio_vs_baseline() const; // survivors / baseline
};

/// Maximum number of surviving pairs materialized into GuessReport::candidates.
constexpr size_t kGuessCandidateCap = 1 << 16;

/**
 * The Step-1 guessing attack. Against Chang, a pair (pw', new_pw') survives
 * when both unmaskings of msg1 agree on one decodable R_A (the published
 * equality filter) and, second filter, that element passes subgroup
 * validation. Against the proposed protocol x1 and x2 mask distinct
 * elements, the equality test relates nothing, and only per-side decode
 * validity remains: the surviving set equals the baseline.
 */
GuessReport attack_offline_guess(const Transcript& t, const std::vector<Password>& dictionary);

/// Same filter chain applied to a single pair; lets tests and oracles check
/// true-pair membership without materializing the full candidate set.
bool offline_pair_survives(const Transcript& t, const Password& pw, const Password& new_pw);

enum class AttackKind { OfflineGuess, DoS, KnownKey };

std::string_view attack_name(AttackKind a);

/// succeeded comes from an oracle over terminal states and ground truth,
/// never from attacker-side heuristics.
struct AttackVerdict {
    AttackKind attack = AttackKind::DoS;
    ProtocolKind target = ProtocolKind::Chang;
    bool succeeded = false;
    std::map<std::string, std::string> evidence;
};

/**
 * The password-desynchronization attack. Against Chang: XOR c into msg1.x2
 * and fit(c, 32) into msg3, so Bob installs new_pw ^ c while every check
 * passes. Against the proposed protocol only the msg1.x2 tamper exists
 * (msg3 is an unmasked digest); Alice's Step-3 verification then aborts the
 * session, so the attacker injects a forged msg3 to force Bob through his
 * Step-4 search, which exhausts the dictionary and rejects.
 *
 * The oracle: succeeded iff Bob accepted AND his stored password diverged
 * from Alice's intended new password.
 */
std::pair<Transcript, AttackVerdict> attack_dos(SessionDriver& alice, SessionDriver& bob,
                                                const Bytes& c, ProtocolKind protocol,
                                                const GroupParams& params, std::string preset,
                                                Identity id_a, Identity id_b);

/// What the attacker holds for the known-key attack. `password` models the
/// compromised-current-password variant of the same attack.
struct CompromisedMaterial {
    std::optional<SharedKey> chang_key; // K_A = K_B of a past Chang session
    std::optional<SharedKey> key1;      // proposed Key_1
    std::optional<SharedKey> key2;      // proposed Key_2
    std::optional<Password> password;   // current pw (Chang variant)

    bool any() const;
};

/**
 * Known-key attack over a finished transcript. Against Chang a compromised
 * session key unmasks msg3 directly (and a compromised current password
 * unmasks msg1); the oracle compares the recovered secret against
 * true_new_pw. Against the proposed protocol a Step-4-style sweep needs
 * Key_1 and a way to compute Key_2 per candidate, which requires an exponent
 * the attacker never has; any single compromised key leaves zero verifiable
 * candidates, and both keys together only re-verify msg3's tag without
 * linking Key_2 back to x2.
 */
AttackVerdict attack_known_key(const Transcript& t, const CompromisedMaterial& compromised,
                               const std::vector<Password>& dictionary,
                               const Password& true_new_pw);

} // namespace pwlab

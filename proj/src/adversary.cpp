#include "pwlab/adversary.hpp"

#include <algorithm>
#include <utility>

#include "pwlab/chang.hpp"
#include "pwlab/error.hpp"
#include "pwlab/proposed.hpp"

namespace pwlab {

std::string_view protocol_name(ProtocolKind p) {
    return p == ProtocolKind::Chang ? "chang" : "proposed";
}

std::string_view direction_name(Direction d) {
    return d == Direction::AtoB ? "a_to_b" : "b_to_a";
}

std::string_view action_name(ChannelAction a) {
    switch (a) {
    case ChannelAction::Delivered: return "delivered";
    case ChannelAction::Modified: return "modified";
    case ChannelAction::Dropped: return "dropped";
    case ChannelAction::Injected: return "injected";
    }
    return "?";
}

std::string_view attack_name(AttackKind a) {
    switch (a) {
    case AttackKind::OfflineGuess: return "offline-guess";
    case AttackKind::DoS: return "dos";
    case AttackKind::KnownKey: return "known-key";
    }
    return "?";
}

const ChannelEvent* Transcript::find(uint32_t seq) const {
    for (const ChannelEvent& ev : events)
        if (ev.seq == seq)
            return &ev;
    return nullptr;
}

const Bytes& Transcript::delivered(uint32_t seq) const {
    const ChannelEvent* ev = find(seq);
    if (!ev || ev->action == ChannelAction::Dropped)
        throw Error(Errc::MissingMessage,
                    "message " + std::to_string(seq) + " not present in transcript");
    return ev->payload;
}

TamperRule TamperRule::xor_at(size_t offset, Bytes mask) {
    return TamperRule{Kind::XorMask, offset, std::move(mask)};
}

TamperRule TamperRule::replace(Bytes bytes) {
    return TamperRule{Kind::Replace, 0, std::move(bytes)};
}

TamperRule TamperRule::drop() { return TamperRule{Kind::Drop, 0, {}}; }

namespace {

Bytes apply_xor_rule(const Bytes& payload, const TamperRule& rule) {
    if (rule.offset + rule.bytes.size() > payload.size())
        throw Error(Errc::ConfigError, "xor tamper runs past end of message");
    Bytes out = payload;
    for (size_t i = 0; i < rule.bytes.size(); ++i)
        out[rule.offset + i] ^= rule.bytes[i];
    return out;
}

} // namespace

Transcript mitm_channel(SessionDriver& alice, SessionDriver& bob, const TamperPlan& plan,
                        ProtocolKind protocol, const GroupParams& params, std::string preset,
                        Identity id_a, Identity id_b) {
    Transcript t;
    t.protocol = protocol;
    t.preset = std::move(preset);
    t.params = &params;
    t.id_a = std::move(id_a);
    t.id_b = std::move(id_b);

    // Three-message protocols; the bound only guards against a runaway plan.
    constexpr uint32_t kMaxSeq = 8;

    std::optional<Bytes> outgoing = alice.open();
    Direction dir = Direction::AtoB;
    for (uint32_t seq = 1; seq <= kMaxSeq; ++seq) {
        ChannelEvent ev;
        ev.seq = seq;
        ev.direction = dir;
        bool deliver = false;

        if (outgoing) {
            auto rule = plan.rules.find({seq, dir});
            if (rule == plan.rules.end()) {
                ev.action = ChannelAction::Delivered;
                ev.payload = *outgoing;
                deliver = true;
            } else {
                switch (rule->second.kind) {
                case TamperRule::Kind::Drop:
                    ev.action = ChannelAction::Dropped;
                    ev.payload = *outgoing;
                    break;
                case TamperRule::Kind::XorMask:
                    ev.action = ChannelAction::Modified;
                    ev.original = *outgoing;
                    ev.payload = apply_xor_rule(*outgoing, rule->second);
                    deliver = true;
                    break;
                case TamperRule::Kind::Replace:
                    ev.action = ChannelAction::Modified;
                    ev.original = *outgoing;
                    ev.payload = rule->second.bytes;
                    deliver = true;
                    break;
                }
            }
        } else {
            auto inj = plan.injections.find({seq, dir});
            if (inj == plan.injections.end())
                break; // the flow stalled and nothing covers the gap
            ev.action = ChannelAction::Injected;
            ev.payload = inj->second;
            deliver = true;
        }

        t.events.push_back(ev);

        std::optional<Bytes> reply;
        if (deliver) {
            SessionDriver& receiver = dir == Direction::AtoB ? bob : alice;
            reply = receiver.on_message(ev.payload);
        }
        outgoing = std::move(reply);
        dir = dir == Direction::AtoB ? Direction::BtoA : Direction::AtoB;
    }

    t.complete = alice.finished() && bob.finished();
    return t;
}

// ---- offline password guessing ---------------------------------------------

double GuessReport::reduction_ratio() const {
    return total_pairs == 0 ? 0.0
                            : static_cast<double>(survivor_count) / static_cast<double>(total_pairs);
}

double GuessReport::ratio_vs_baseline() const {
    return baseline_count == 0
               ? 0.0
               : static_cast<double>(survivor_count) / static_cast<double>(baseline_count);
}

namespace {

struct Msg1View {
    Bytes x1;
    Bytes x2;
};

Msg1View split_msg1(const Transcript& t) {
    const Bytes& wire = t.delivered(1);
    const size_t n = t.params->byte_len;
    if (wire.size() != 2 * n)
        throw Error(Errc::MissingMessage, "first transcript message is not a msg1");
    return Msg1View{Bytes(wire.begin(), wire.begin() + n), Bytes(wire.begin() + n, wire.end())};
}

// Per-candidate unmasking facts for one masked field.
struct UnmaskFacts {
    Bytes bytes;
    bool decodes = false;
    bool in_subgroup = false;
};

std::vector<UnmaskFacts> unmask_side(const Bytes& field, const std::vector<Password>& dict,
                                     const GroupParams& params, bool want_subgroup) {
    std::vector<UnmaskFacts> out;
    out.reserve(dict.size());
    for (const Password& pw : dict) {
        UnmaskFacts f;
        f.bytes = mask(field, pw);
        if (auto el = try_decode_element(f.bytes, params)) {
            f.decodes = true;
            if (want_subgroup)
                f.in_subgroup = validate_subgroup(*el);
        }
        out.push_back(std::move(f));
    }
    return out;
}

} // namespace

GuessReport attack_offline_guess(const Transcript& t, const std::vector<Password>& dictionary) {
    const Msg1View m1 = split_msg1(t);
    const GroupParams& params = *t.params;

    GuessReport report;
    report.dictionary_size = dictionary.size();
    report.total_pairs = static_cast<uint64_t>(dictionary.size()) * dictionary.size();

    const bool chang = t.protocol == ProtocolKind::Chang;
    const auto side1 = unmask_side(m1.x1, dictionary, params, chang);
    const auto side2 = unmask_side(m1.x2, dictionary, params, false);

    uint64_t decodable1 = 0, decodable2 = 0;
    for (const auto& f : side1) decodable1 += f.decodes ? 1 : 0;
    for (const auto& f : side2) decodable2 += f.decodes ? 1 : 0;
    report.baseline_count = decodable1 * decodable2;

    auto push_candidate = [&](size_t i, size_t j) {
        if (report.candidates.size() < kGuessCandidateCap)
            report.candidates.emplace_back(dictionary[i], dictionary[j]);
        else
            report.candidates_truncated = true;
    };

    if (chang) {
        // Step 1 of Chang masks the same R_A twice, so unmaskings that agree
        // on one decodable, subgroup-valid element pin the password pair.
        report.filters_applied = {"xor_equality", "subgroup"};
        for (size_t i = 0; i < side1.size(); ++i) {
            for (size_t j = 0; j < side2.size(); ++j) {
                if (side1[i].bytes != side2[j].bytes)
                    continue;
                if (!side1[i].decodes || !side1[i].in_subgroup)
                    continue;
                ++report.survivor_count;
                push_candidate(i, j);
            }
        }
    } else {
        // x1 and x2 mask independent elements: the equality test relates
        // nothing and per-side decode validity is all the transcript leaks.
        report.filters_applied = {"decode_validity"};
        report.survivor_count = report.baseline_count;
        for (size_t i = 0; i < side1.size() && !report.candidates_truncated; ++i) {
            if (!side1[i].decodes)
                continue;
            for (size_t j = 0; j < side2.size(); ++j) {
                if (!side2[j].decodes)
                    continue;
                if (report.candidates.size() >= kGuessCandidateCap) {
                    report.candidates_truncated = true;
                    break;
                }
                push_candidate(i, j);
            }
        }
    }
    return report;
}

bool offline_pair_survives(const Transcript& t, const Password& pw, const Password& new_pw) {
    const Msg1View m1 = split_msg1(t);
    const GroupParams& params = *t.params;
    const Bytes u1 = mask(m1.x1, pw);
    const Bytes u2 = mask(m1.x2, new_pw);
    const auto el1 = try_decode_element(u1, params);
    if (t.protocol == ProtocolKind::Chang) {
        if (u1 != u2 || !el1)
            return false;
        return validate_subgroup(*el1);
    }
    return el1.has_value() && try_decode_element(u2, params).has_value();
}

// ---- denial of service -------------------------------------------------------

namespace {

Bytes fit_to_digest_width(const Bytes& c) {
    Bytes out(kDigestLen, 0);
    const size_t n = std::min(c.size(), out.size());
    std::copy(c.end() - static_cast<ptrdiff_t>(n), c.end(),
              out.begin() + static_cast<ptrdiff_t>(out.size() - n));
    return out;
}

std::string divergence_hex(const Password& a, const Password& b) {
    const size_t w = std::max(a.bytes().size(), b.bytes().size());
    return to_hex(xor_bytes(fit(a, w), fit(b, w)));
}

} // namespace

std::pair<Transcript, AttackVerdict> attack_dos(SessionDriver& alice, SessionDriver& bob,
                                                const Bytes& c, ProtocolKind protocol,
                                                const GroupParams& params, std::string preset,
                                                Identity id_a, Identity id_b) {
    if (c.size() != params.byte_len)
        throw Error(Errc::ConfigError, "dos tamper bytes must be byte_len wide");

    TamperPlan plan;
    plan.rules[{1, Direction::AtoB}] = TamperRule::xor_at(params.byte_len, c);
    if (protocol == ProtocolKind::Chang) {
        plan.rules[{3, Direction::AtoB}] = TamperRule::xor_at(0, fit_to_digest_width(c));
    } else {
        // No compensating msg3 tamper exists (msg3 is an unmasked digest) and
        // Alice's Step-3 check aborts her once x2 was touched; a forged msg3
        // is injected so Bob still runs his Step-4 search to exhaustion.
        plan.injections[{3, Direction::AtoB}] = fit_to_digest_width(c);
    }

    Transcript t = mitm_channel(alice, bob, plan, protocol, params, std::move(preset),
                                std::move(id_a), std::move(id_b));

    // Oracle: terminal states and ground truth only.
    const PartyFacts af = alice.facts();
    const PartyFacts bf = bob.facts();
    AttackVerdict v;
    v.attack = AttackKind::DoS;
    v.target = protocol;
    const bool diverged = bf.stored_password && af.intended_new_pw &&
                          !same_secret(*bf.stored_password, *af.intended_new_pw);
    v.succeeded = bf.accepted && diverged;
    v.evidence["alice_phase"] = af.phase;
    v.evidence["bob_phase"] = bf.phase;
    v.evidence["tamper_c"] = to_hex(c);
    if (bf.stored_password)
        v.evidence["bob_stored_password"] = bf.stored_password->hex();
    if (af.intended_new_pw)
        v.evidence["alice_new_pw"] = af.intended_new_pw->hex();
    if (bf.stored_password && af.intended_new_pw)
        v.evidence["stored_divergence"] = divergence_hex(*bf.stored_password, *af.intended_new_pw);
    if (protocol == ProtocolKind::Proposed)
        v.evidence["bob_iterations"] = std::to_string(bf.iterations_used);
    return {t, v};
}

// ---- known-key ----------------------------------------------------------------

bool CompromisedMaterial::any() const {
    return chang_key || key1 || key2 || password;
}

namespace {

Password strip_recovered(const Bytes& wide) {
    size_t first = 0;
    while (first + 1 < wide.size() && wide[first] == 0)
        ++first;
    return Password::recovered(Bytes(wide.begin() + static_cast<ptrdiff_t>(first), wide.end()));
}

AttackVerdict known_key_chang(const Transcript& t, const CompromisedMaterial& mat,
                              const Password& true_new_pw) {
    AttackVerdict v;
    v.attack = AttackKind::KnownKey;
    v.target = ProtocolKind::Chang;

    std::optional<Password> recovered;
    if (mat.chang_key) {
        // msg3 = H(K, R_B) ^ new_pw: the compromised key opens it directly.
        const Bytes msg2 = t.delivered(2);
        const GroupParams& params = *t.params;
        const Bytes rb_bytes(msg2.begin(), msg2.begin() + static_cast<ptrdiff_t>(params.byte_len));
        const Digest pad = hash_H({encode_element(mat.chang_key->value), rb_bytes});
        recovered = strip_recovered(xor_bytes(t.delivered(3), digest_to_bytes(pad)));
        v.evidence["method"] = "unmask_msg3_with_session_key";
    } else if (mat.password) {
        // msg1 carries (R_A ^ pw, R_A ^ new_pw): with pw both masks cancel.
        const Bytes& msg1 = t.delivered(1);
        const size_t n = t.params->byte_len;
        const Bytes x1(msg1.begin(), msg1.begin() + static_cast<ptrdiff_t>(n));
        const Bytes x2(msg1.begin() + static_cast<ptrdiff_t>(n), msg1.end());
        recovered = strip_recovered(xor_bytes(mask(x1, *mat.password), x2));
        v.evidence["method"] = "unmask_msg1_with_current_password";
    } else {
        v.evidence["method"] = "none";
        v.evidence["note"] = "nothing compromised; attack inapplicable";
        v.succeeded = false;
        return v;
    }

    v.evidence["recovered_new_pw"] = recovered->hex();
    // Oracle: compare against the true secret.
    v.succeeded = same_secret(*recovered, true_new_pw);
    return v;
}

AttackVerdict known_key_proposed(const Transcript& t, const CompromisedMaterial& mat,
                                 const std::vector<Password>& dictionary,
                                 const Password& true_new_pw) {
    AttackVerdict v;
    v.attack = AttackKind::KnownKey;
    v.target = ProtocolKind::Proposed;
    v.succeeded = false;

    if (!mat.any()) {
        v.evidence["method"] = "none";
        v.evidence["note"] = "nothing compromised; attack inapplicable";
        return v;
    }

    const GroupParams& params = *t.params;
    const size_t n = params.byte_len;
    const Bytes& msg1 = t.delivered(1);
    const Bytes x2(msg1.begin() + static_cast<ptrdiff_t>(n), msg1.end());

    if (mat.key1 && mat.key2) {
        // Both keys re-verify msg3's tag, confirming they belong to this
        // transcript; linking Key_2 back to x2 still needs exponent b or c,
        // so the new password stays out of reach.
        const Bytes msg2 = t.delivered(2);
        const Bytes rc_bytes(msg2.begin(), msg2.begin() + static_cast<ptrdiff_t>(n));
        const Digest expected = hash_H({encode_element(mat.key1->value),
                                        encode_element(mat.key2->value), rc_bytes,
                                        t.id_a.bytes(), t.id_b.bytes()});
        const bool tag_ok = digest_to_bytes(expected) == t.delivered(3);
        v.evidence["method"] = "tag_verification_with_both_keys";
        v.evidence["tag_verified"] = tag_ok ? "true" : "false";
        v.evidence["note"] = "password recovery not demonstrated: Key_2 cannot be tied to a "
                             "candidate R_B' without exponent b or c";
        v.evidence["candidates_swept"] = std::to_string(dictionary.size());
        return v;
    }

    // One key (or only the old password): sweep the dictionary the way Bob's
    // Step 4 would. Every check of a candidate needs Key_2' = R_B'^c, and no
    // compromised value supplies c (or b); nothing is verifiable.
    size_t decode_valid = 0;
    for (const Password& cand : dictionary) {
        if (try_decode_element(mask(x2, cand), params))
            ++decode_valid;
        // dead end: Key_2' = R_B'^c needs the exponent c the attacker lacks
    }
    v.evidence["method"] = mat.key1 ? "sweep_with_key1_only"
                          : mat.key2 ? "sweep_with_key2_only"
                                     : "sweep_with_current_password_only";
    v.evidence["candidates_swept"] = std::to_string(dictionary.size());
    v.evidence["decode_valid_candidates"] = std::to_string(decode_valid);
    v.evidence["verifiable_candidates"] = "0";
    v.evidence["note"] = "no predicate distinguishes candidates without the missing key material";
    (void)true_new_pw;
    return v;
}

} // namespace

AttackVerdict attack_known_key(const Transcript& t, const CompromisedMaterial& compromised,
                               const std::vector<Password>& dictionary,
                               const Password& true_new_pw) {
    if (t.protocol == ProtocolKind::Chang)
        return known_key_chang(t, compromised, true_new_pw);
    return known_key_proposed(t, compromised, dictionary, true_new_pw);
}

} // namespace pwlab

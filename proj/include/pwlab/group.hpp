#pragma once

#include <gmpxx.h>

#include <cstddef>
#include <string>
#include <string_view>

#include "pwlab/bytes.hpp"
#include "pwlab/rng.hpp"

namespace pwlab {

/**
 * A Diffie-Hellman group: prime modulus p, prime subgroup order q, and a
 * generator g of the order-q subgroup. byte_len is the canonical fixed-width
 * encoding length, ceil(bitlen(p)/8).
 *
 * Construct through make_params(), which verifies primality of p and q,
 * q | p-1, and g^q mod p = 1 with g != 1. Instances are immutable; protocol
 * values keep a pointer back to their params, so keep the GroupParams alive
 * for as long as any element derived from it.
 */
struct GroupParams {
    mpz_class p;
    mpz_class q;
    mpz_class g;
    size_t byte_len = 0;
    std::string name;
};

/// Subgroup element candidate in [1, p-1]. `validated` records whether the
/// value is known to satisfy x^q mod p = 1: true for honestly computed
/// values, false for anything decoded off the wire until checked.
struct GroupElement {
    mpz_class value;
    const GroupParams* params = nullptr;
    bool validated = false;

    bool operator==(const GroupElement& other) const { return value == other.value; }
};

/// Secret exponent in [1, q-1].
struct Exponent {
    mpz_class value;
};

/// Diffie-Hellman shared secret; same representation as a group element.
struct SharedKey {
    GroupElement value;

    bool operator==(const SharedKey& other) const { return value == other.value; }
};

/// Validates (p, q, g) and computes byte_len. Throws Error with code
/// NotPrime, OrderMismatch or BadGenerator.
GroupParams make_params(const mpz_class& p, const mpz_class& q, const mpz_class& g,
                        std::string name = "");

GroupParams make_params_hex(std::string_view p_hex, std::string_view q_hex,
                            std::string_view g_hex, std::string name = "");

/// base^e mod p. The result inherits `validated` from the base (powers of a
/// subgroup member stay in the subgroup).
GroupElement modexp(const GroupElement& base, const Exponent& e);

/// Wraps modexp(peer_public, own_secret) as a shared key. Throws
/// Error(InvalidElement) if peer_public is out of [1, p-1].
SharedKey dh_key(const GroupElement& peer_public, const Exponent& own_secret);

/// True iff x^q mod p = 1, i.e. x lies in the order-q subgroup.
bool validate_subgroup(const GroupElement& x);

/// Uniform exponent in [1, q-1] by rejection sampling from the stream.
Exponent random_exponent(const GroupParams& params, DetRng& rng);

GroupElement make_element(const mpz_class& value, const GroupParams& params,
                          bool validated = false);

/// g^e mod p for the group generator, validated by construction.
GroupElement generator_power(const GroupParams& params, const Exponent& e);

// Built-in presets. `tiny` (p=23) keeps every oracle exhaustive, `desk` is a
// 64-bit safe prime for attack scenarios, `demo` is the well-known 2048-bit
// MODP safe prime. All three are validated by make_params on first use.
const GroupParams& preset_tiny();
const GroupParams& preset_desk();
const GroupParams& preset_demo();

/// Resolves one of the built-in presets by name; throws Error(ConfigError).
const GroupParams& preset_by_name(std::string_view name);

mpz_class mpz_from_bytes_be(const Bytes& b);
Bytes mpz_to_bytes_be(const mpz_class& v, size_t width);
std::string mpz_to_hex(const mpz_class& v);
mpz_class mpz_from_hex(std::string_view hex);

} // namespace pwlab

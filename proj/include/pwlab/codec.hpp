#pragma once

#include <optional>
#include <span>

#include "pwlab/bytes.hpp"
#include "pwlab/group.hpp"

namespace pwlab {

/**
 * A short human-memorable secret, 1..64 bytes.
 *
 * Secrets recovered from protocol messages are attacker-influenced byte
 * strings of the receiving side's mask width and may exceed the 64-byte
 * bound; build those with Password::recovered(), which only requires
 * non-emptiness.
 */
class Password {
public:
    explicit Password(Bytes bytes);

    static Password recovered(Bytes bytes);
    static Password from_hex_str(std::string_view hex);

    const Bytes& bytes() const { return bytes_; }
    std::string hex() const { return to_hex(bytes_); }

    bool operator==(const Password& other) const { return bytes_ == other.bytes_; }

private:
    Password() = default;
    Bytes bytes_;
};

/// Zero-extension-insensitive comparison: the XOR masking cannot transport
/// leading zero bytes, so secrets that fit() identically are the same secret.
bool same_secret(const Password& a, const Password& b);

/// Party identity, 1..32 bytes.
class Identity {
public:
    explicit Identity(Bytes bytes);
    static Identity from_text(std::string_view text);
    static Identity from_hex_str(std::string_view hex);

    const Bytes& bytes() const { return bytes_; }
    std::string hex() const { return to_hex(bytes_); }

    bool operator==(const Identity& other) const { return bytes_ == other.bytes_; }

private:
    Bytes bytes_;
};

/// Fixed-width big-endian encoding of x, byte_len bytes.
Bytes encode_element(const GroupElement& x);

/// Inverse of encode_element. Throws Error(OutOfRange) when the integer
/// value is 0 or >= p. The result carries validated=false.
GroupElement decode_element(const Bytes& b, const GroupParams& params);

/// Non-throwing decode for candidate-search loops, where a failing decode is
/// the expected common case rather than an error.
std::optional<GroupElement> try_decode_element(const Bytes& b, const GroupParams& params);

/// Width-fits a secret: zero-extends on the left, or keeps the rightmost
/// `width` bytes when the secret is longer.
Bytes fit(const Password& pw, size_t width);

/// data XOR fit(pw, |data|). Self-inverse in the first argument.
Bytes mask(const Bytes& data, const Password& pw);

/**
 * The protocol hash H. Fields are framed as concat(4-byte big-endian length,
 * field bytes) and the frame is digested with SHA-256; the length prefixes
 * make the tuple -> frame mapping injective. Every field must be non-empty.
 */
Digest hash_H(std::span<const Bytes> fields);
Digest hash_H(std::initializer_list<Bytes> fields);

/// The exact frame hash_H digests; exposed for golden-vector checks.
Bytes hash_frame(std::span<const Bytes> fields);

} // namespace pwlab

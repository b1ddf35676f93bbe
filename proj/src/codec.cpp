#include "pwlab/codec.hpp"

#include <openssl/evp.h>

#include <utility>

#include "pwlab/error.hpp"

namespace pwlab {

namespace {

constexpr size_t kMaxPasswordLen = 64;
constexpr size_t kMaxIdentityLen = 32;

} // namespace

Password::Password(Bytes bytes) : bytes_(std::move(bytes)) {
    if (bytes_.empty())
        throw Error(Errc::ConfigError, "password must be non-empty");
    if (bytes_.size() > kMaxPasswordLen)
        throw Error(Errc::ConfigError, "password exceeds 64 bytes");
}

Password Password::recovered(Bytes bytes) {
    if (bytes.empty())
        throw Error(Errc::ConfigError, "recovered password must be non-empty");
    Password pw;
    pw.bytes_ = std::move(bytes);
    return pw;
}

Password Password::from_hex_str(std::string_view hex) { return Password(from_hex(hex)); }

bool same_secret(const Password& a, const Password& b) {
    const Bytes& xa = a.bytes();
    const Bytes& xb = b.bytes();
    const Bytes& longer = xa.size() >= xb.size() ? xa : xb;
    const Bytes& shorter = xa.size() >= xb.size() ? xb : xa;
    const size_t pad = longer.size() - shorter.size();
    for (size_t i = 0; i < pad; ++i)
        if (longer[i] != 0)
            return false;
    for (size_t i = 0; i < shorter.size(); ++i)
        if (longer[pad + i] != shorter[i])
            return false;
    return true;
}

Identity::Identity(Bytes bytes) : bytes_(std::move(bytes)) {
    if (bytes_.empty())
        throw Error(Errc::ConfigError, "identity must be non-empty");
    if (bytes_.size() > kMaxIdentityLen)
        throw Error(Errc::ConfigError, "identity exceeds 32 bytes");
}

Identity Identity::from_text(std::string_view text) {
    return Identity(Bytes(text.begin(), text.end()));
}

Identity Identity::from_hex_str(std::string_view hex) { return Identity(from_hex(hex)); }

Bytes encode_element(const GroupElement& x) {
    return mpz_to_bytes_be(x.value, x.params->byte_len);
}

GroupElement decode_element(const Bytes& b, const GroupParams& params) {
    if (b.size() != params.byte_len)
        throw Error(Errc::OutOfRange,
                    "element encoding must be exactly " + std::to_string(params.byte_len) +
                        " bytes");
    mpz_class v = mpz_from_bytes_be(b);
    if (v < 1 || v >= params.p)
        throw Error(Errc::OutOfRange, "decoded value outside [1, p-1]");
    return GroupElement{v, &params, false};
}

std::optional<GroupElement> try_decode_element(const Bytes& b, const GroupParams& params) {
    if (b.size() != params.byte_len)
        return std::nullopt;
    mpz_class v = mpz_from_bytes_be(b);
    if (v < 1 || v >= params.p)
        return std::nullopt;
    return GroupElement{v, &params, false};
}

Bytes fit(const Password& pw, size_t width) {
    const Bytes& src = pw.bytes();
    Bytes out(width, 0);
    if (src.size() >= width) {
        // keep the rightmost `width` bytes
        std::copy(src.end() - static_cast<ptrdiff_t>(width), src.end(), out.begin());
    } else {
        std::copy(src.begin(), src.end(), out.begin() + static_cast<ptrdiff_t>(width - src.size()));
    }
    return out;
}

Bytes mask(const Bytes& data, const Password& pw) {
    return xor_bytes(data, fit(pw, data.size()));
}

Bytes hash_frame(std::span<const Bytes> fields) {
    Bytes frame;
    for (const Bytes& f : fields) {
        if (f.empty())
            throw Error(Errc::ConfigError, "hash_H fields must be non-empty");
        const uint32_t len = static_cast<uint32_t>(f.size());
        frame.push_back(static_cast<uint8_t>(len >> 24));
        frame.push_back(static_cast<uint8_t>(len >> 16));
        frame.push_back(static_cast<uint8_t>(len >> 8));
        frame.push_back(static_cast<uint8_t>(len));
        frame.insert(frame.end(), f.begin(), f.end());
    }
    return frame;
}

Digest hash_H(std::span<const Bytes> fields) {
    const Bytes frame = hash_frame(fields);
    Digest out{};
    unsigned int len = 0;
    if (EVP_Digest(frame.data(), frame.size(), out.data(), &len, EVP_sha256(), nullptr) != 1 ||
        len != out.size())
        throw Error(Errc::IoError, "SHA-256 failed");
    return out;
}

Digest hash_H(std::initializer_list<Bytes> fields) {
    std::vector<Bytes> v(fields);
    return hash_H(std::span<const Bytes>(v));
}

} // namespace pwlab

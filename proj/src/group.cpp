#include "pwlab/group.hpp"

#include <utility>

#include "pwlab/error.hpp"

namespace pwlab {

namespace {

// Miller-Rabin rounds for mpz_probab_prime_p; 30 rounds puts the error
// probability below 2^-60.
constexpr int kPrimalityRounds = 30;

bool is_probable_prime(const mpz_class& n) {
    return mpz_probab_prime_p(n.get_mpz_t(), kPrimalityRounds) != 0;
}

} // namespace

mpz_class mpz_from_bytes_be(const Bytes& b) {
    mpz_class v;
    if (!b.empty())
        mpz_import(v.get_mpz_t(), b.size(), 1, 1, 1, 0, b.data());
    return v;
}

Bytes mpz_to_bytes_be(const mpz_class& v, size_t width) {
    Bytes out(width, 0);
    size_t count = 0;
    if (v != 0)
        mpz_export(nullptr, &count, 1, 1, 1, 0, v.get_mpz_t());
    if (count > width)
        throw Error(Errc::OutOfRange, "value does not fit in " + std::to_string(width) + " bytes");
    if (count > 0)
        mpz_export(out.data() + (width - count), &count, 1, 1, 1, 0, v.get_mpz_t());
    return out;
}

std::string mpz_to_hex(const mpz_class& v) {
    return v.get_str(16);
}

mpz_class mpz_from_hex(std::string_view hex) {
    mpz_class v;
    if (hex.empty() || mpz_set_str(v.get_mpz_t(), std::string(hex).c_str(), 16) != 0)
        throw Error(Errc::ConfigError, "bad hex integer '" + std::string(hex) + "'");
    return v;
}

GroupParams make_params(const mpz_class& p, const mpz_class& q, const mpz_class& g,
                        std::string name) {
    if (!is_probable_prime(p))
        throw Error(Errc::NotPrime, "p is composite");
    if (!is_probable_prime(q))
        throw Error(Errc::NotPrime, "q is composite");
    if ((p - 1) % q != 0)
        throw Error(Errc::OrderMismatch, "q does not divide p-1");
    if (g <= 1 || g >= p)
        throw Error(Errc::BadGenerator, "g outside (1, p)");
    mpz_class r;
    mpz_powm(r.get_mpz_t(), g.get_mpz_t(), q.get_mpz_t(), p.get_mpz_t());
    if (r != 1)
        throw Error(Errc::BadGenerator, "g^q mod p != 1");

    GroupParams params;
    params.p = p;
    params.q = q;
    params.g = g;
    params.byte_len = (mpz_sizeinbase(p.get_mpz_t(), 2) + 7) / 8;
    params.name = std::move(name);
    return params;
}

GroupParams make_params_hex(std::string_view p_hex, std::string_view q_hex,
                            std::string_view g_hex, std::string name) {
    return make_params(mpz_from_hex(p_hex), mpz_from_hex(q_hex), mpz_from_hex(g_hex),
                       std::move(name));
}

GroupElement make_element(const mpz_class& value, const GroupParams& params, bool validated) {
    if (value < 1 || value >= params.p)
        throw Error(Errc::InvalidElement, "element outside [1, p-1]");
    return GroupElement{value, &params, validated};
}

GroupElement modexp(const GroupElement& base, const Exponent& e) {
    const GroupParams& params = *base.params;
    mpz_class r;
    mpz_powm(r.get_mpz_t(), base.value.get_mpz_t(), e.value.get_mpz_t(),
             params.p.get_mpz_t());
    return GroupElement{r, &params, base.validated};
}

SharedKey dh_key(const GroupElement& peer_public, const Exponent& own_secret) {
    const GroupParams& params = *peer_public.params;
    if (peer_public.value < 1 || peer_public.value >= params.p)
        throw Error(Errc::InvalidElement, "peer public value outside [1, p-1]");
    return SharedKey{modexp(peer_public, own_secret)};
}

bool validate_subgroup(const GroupElement& x) {
    const GroupParams& params = *x.params;
    mpz_class r;
    mpz_powm(r.get_mpz_t(), x.value.get_mpz_t(), params.q.get_mpz_t(), params.p.get_mpz_t());
    return r == 1;
}

Exponent random_exponent(const GroupParams& params, DetRng& rng) {
    const size_t bits = mpz_sizeinbase(params.q.get_mpz_t(), 2);
    const size_t nbytes = (bits + 7) / 8;
    const unsigned top_mask =
        bits % 8 == 0 ? 0xffu : ((1u << (bits % 8)) - 1);

    Bytes buf(nbytes);
    while (true) {
        rng.fill(buf);
        buf[0] = static_cast<uint8_t>(buf[0] & top_mask);
        mpz_class v = mpz_from_bytes_be(buf);
        if (v >= 1 && v <= params.q - 1)
            return Exponent{v};
    }
}

GroupElement generator_power(const GroupParams& params, const Exponent& e) {
    GroupElement g{params.g, &params, true};
    return modexp(g, e);
}

namespace {

// Largest 64-bit safe prime; q = (p-1)/2, g = 4 = 2^2 is a quadratic residue
// and therefore generates the order-q subgroup.
constexpr const char* kDeskP = "fffffffffffffa43";
constexpr const char* kDeskQ = "7ffffffffffffd21";

// RFC 3526 group 14: the 2048-bit MODP safe prime, generator 2.
constexpr const char* kDemoP =
    "ffffffffffffffffc90fdaa22168c234c4c6628b80dc1cd129024e088a67cc74"
    "020bbea63b139b22514a08798e3404ddef9519b3cd3a431b302b0a6df25f1437"
    "4fe1356d6d51c245e485b576625e7ec6f44c42e9a637ed6b0bff5cb6f406b7ed"
    "ee386bfb5a899fa5ae9f24117c4b1fe649286651ece45b3dc2007cb8a163bf05"
    "98da48361c55d39a69163fa8fd24cf5f83655d23dca3ad961c62f356208552bb"
    "9ed529077096966d670c354e4abc9804f1746c08ca18217c32905e462e36ce3b"
    "e39e772c180e86039b2783a2ec07a28fb5c55df06f4c52c9de2bcbf695581718"
    "3995497cea956ae515d2261898fa051015728e5a8aacaa68ffffffffffffffff";
constexpr const char* kDemoQ =
    "7fffffffffffffffe487ed5110b4611a62633145c06e0e68948127044533e63a"
    "0105df531d89cd9128a5043cc71a026ef7ca8cd9e69d218d98158536f92f8a1b"
    "a7f09ab6b6a8e122f242dabb312f3f637a262174d31bf6b585ffae5b7a035bf6"
    "f71c35fdad44cfd2d74f9208be258ff324943328f6722d9ee1003e5c50b1df82"
    "cc6d241b0e2ae9cd348b1fd47e9267afc1b2ae91ee51d6cb0e3179ab1042a95d"
    "cf6a9483b84b4b36b3861aa7255e4c0278ba3604650c10be19482f23171b671d"
    "f1cf3b960c074301cd93c1d17603d147dae2aef837a62964ef15e5fb4aac0b8c"
    "1ccaa4be754ab5728ae9130c4c7d02880ab9472d455655347fffffffffffffff";

} // namespace

const GroupParams& preset_tiny() {
    static const GroupParams params = make_params(23, 11, 4, "tiny");
    return params;
}

const GroupParams& preset_desk() {
    static const GroupParams params = make_params_hex(kDeskP, kDeskQ, "4", "desk");
    return params;
}

const GroupParams& preset_demo() {
    static const GroupParams params = make_params_hex(kDemoP, kDemoQ, "2", "demo");
    return params;
}

const GroupParams& preset_by_name(std::string_view name) {
    if (name == "tiny") return preset_tiny();
    if (name == "desk") return preset_desk();
    if (name == "demo") return preset_demo();
    throw Error(Errc::ConfigError, "unknown preset '" + std::string(name) + "'");
}

} // namespace pwlab

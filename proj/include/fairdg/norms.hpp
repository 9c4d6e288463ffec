#pragma once

#include <array>
#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace fairdg {

enum class Reputation : std::uint8_t { Bad = 0, Good = 1 };
enum class Action : std::uint8_t { Fair, Unfair };

constexpr bool is_good(Reputation r) noexcept { return r == Reputation::Good; }
constexpr Reputation reputation_from(bool good) noexcept
{
    return good ? Reputation::Good : Reputation::Bad;
}

/// Assessment bits (F_G, F_B, N_G, N_B): 1 means the dictator is judged good
/// after taking the action against a recipient of that reputation.
class NormVector {
public:
    constexpr NormVector() = default;
    constexpr NormVector(int fair_good, int fair_bad, int unfair_good, int unfair_bad)
        : bits_{check(fair_good), check(fair_bad), check(unfair_good), check(unfair_bad)}
    {}

    constexpr bool judges_good(Action action, Reputation recipient) const noexcept
    {
        return bits_[index(action, recipient)] != 0;
    }
    constexpr int bit(Action action, Reputation recipient) const noexcept
    {
        return bits_[index(action, recipient)];
    }
    constexpr const std::array<std::uint8_t, 4>& bits() const noexcept { return bits_; }

    friend constexpr bool operator==(const NormVector&, const NormVector&) = default;

private:
    static constexpr std::uint8_t check(int b)
    {
        if (b != 0 && b != 1) {
            throw std::invalid_argument("norm entries must be 0 or 1");
        }
        return static_cast<std::uint8_t>(b);
    }
    static constexpr std::size_t index(Action a, Reputation r) noexcept
    {
        return (a == Action::Fair ? 0U : 2U) + (is_good(r) ? 0U : 1U);
    }

    std::array<std::uint8_t, 4> bits_{};
};

/// Third-order norm: `if_good` is consulted when the dictator was good before
/// acting, `if_bad` when the dictator was bad.
struct SocialNorm {
    NormVector if_good;
    NormVector if_bad;

    constexpr bool second_order() const noexcept { return if_good == if_bad; }
    constexpr const NormVector& for_prior(Reputation prior) const noexcept
    {
        return is_good(prior) ? if_good : if_bad;
    }

    friend constexpr bool operator==(const SocialNorm&, const SocialNorm&) = default;
};

constexpr SocialNorm second_order_norm(NormVector v) noexcept { return {v, v}; }

/// New public reputation of the dictator as judged by a reporting observer.
constexpr Reputation assess(const SocialNorm& norm, Reputation prior, Action action,
                            Reputation recipient) noexcept
{
    return reputation_from(norm.for_prior(prior).judges_good(action, recipient));
}

// ---------------------------------------------------------------------------
// Strategies

/// Behaviour string s_G s_B s_R: action toward good and bad recipients, and
/// whether the player reports when observing.
class Strategy {
public:
    static constexpr std::size_t count = 8;

    constexpr Strategy() = default;
    constexpr Strategy(bool fair_to_good, bool fair_to_bad, bool reports) noexcept
        : code_(static_cast<std::uint8_t>((fair_to_good ? 0 : 4) + (fair_to_bad ? 0 : 2) + (reports ? 0 : 1)))
    {}

    /// Position in the fixed order FFR, FFS, FNR, FNS, NFR, NFS, NNR, NNS.
    static constexpr Strategy from_index(std::size_t idx)
    {
        if (idx >= count) {
            throw std::out_of_range("strategy index out of range");
        }
        Strategy s;
        s.code_ = static_cast<std::uint8_t>(idx);
        return s;
    }
    static Strategy parse(std::string_view text);

    constexpr std::size_t index() const noexcept { return code_; }
    constexpr bool fair_to_good() const noexcept { return (code_ & 4U) == 0; }
    constexpr bool fair_to_bad() const noexcept { return (code_ & 2U) == 0; }
    constexpr bool reports() const noexcept { return (code_ & 1U) == 0; }

    constexpr bool intends_fair(Reputation recipient) const noexcept
    {
        return is_good(recipient) ? fair_to_good() : fair_to_bad();
    }

    /// I(s_G), I(s_B), E(s_R) as 0/1 numbers for the closed-form expressions.
    constexpr double fair_good_indicator() const noexcept { return fair_to_good() ? 1.0 : 0.0; }
    constexpr double fair_bad_indicator() const noexcept { return fair_to_bad() ? 1.0 : 0.0; }
    constexpr double report_indicator() const noexcept { return reports() ? 1.0 : 0.0; }

    std::string name() const
    {
        return {fair_to_good() ? 'F' : 'N', fair_to_bad() ? 'F' : 'N', reports() ? 'R' : 'S'};
    }

    friend constexpr bool operator==(const Strategy&, const Strategy&) = default;
    friend constexpr auto operator<=>(const Strategy&, const Strategy&) = default;

private:
    std::uint8_t code_ = 0;
};

inline std::array<Strategy, Strategy::count> all_strategies()
{
    std::array<Strategy, Strategy::count> out{};
    for (std::size_t k = 0; k < Strategy::count; ++k) {
        out[k] = Strategy::from_index(k);
    }
    return out;
}

inline Strategy Strategy::parse(std::string_view text)
{
    if (text.size() != 3) {
        throw std::invalid_argument("strategy must be three letters, got '" + std::string(text) + "'");
    }
    auto letter = [&](char c, char yes, char no) {
        const char u = static_cast<char>(c >= 'a' && c <= 'z' ? c - 'a' + 'A' : c);
        if (u == yes) return true;
        if (u == no) return false;
        throw std::invalid_argument("bad strategy letter in '" + std::string(text) + "'");
    };
    return {letter(text[0], 'F', 'N'), letter(text[1], 'F', 'N'), letter(text[2], 'R', 'S')};
}

// ---------------------------------------------------------------------------
// Catalogs

namespace vectors {
inline constexpr NormVector stern_judging{1, 0, 0, 1};
inline constexpr NormVector simple_standing{1, 1, 0, 1};
inline constexpr NormVector image_scoring{1, 1, 0, 0};
inline constexpr NormVector shunning{1, 0, 0, 0};
} // namespace vectors

inline constexpr SocialNorm stern_judging = second_order_norm(vectors::stern_judging);
inline constexpr SocialNorm simple_standing = second_order_norm(vectors::simple_standing);
inline constexpr SocialNorm image_scoring = second_order_norm(vectors::image_scoring);
inline constexpr SocialNorm shunning = second_order_norm(vectors::shunning);

struct NamedNorm {
    std::string_view name;
    std::string_view abbreviation;
    SocialNorm norm;
};

inline constexpr std::array<NamedNorm, 4> named_norms{{
    {"stern_judging", "SJ", stern_judging},
    {"simple_standing", "SS", simple_standing},
    {"image_scoring", "IS", image_scoring},
    {"shunning", "SH", shunning},
}};

/// Looks up one of the four named second-order norms by full name or
/// two-letter abbreviation.
inline SocialNorm named_norm(std::string_view name)
{
    for (const auto& n : named_norms) {
        if (n.name == name || n.abbreviation == name) {
            return n.norm;
        }
    }
    throw std::out_of_range("unknown norm name '" + std::string(name) + "'");
}

inline std::optional<std::string_view> norm_abbreviation(const SocialNorm& norm)
{
    for (const auto& n : named_norms) {
        if (n.norm == norm) {
            return n.abbreviation;
        }
    }
    return std::nullopt;
}

/// The leading-eight norms restricted to the dictator game. Order: SJ, SS,
/// the two crossings of SJ/SS vectors, then S^G in {SJ, SS} combined with
/// S^B in {IS, SH}.
inline std::vector<SocialNorm> leading_eight()
{
    constexpr auto sj = vectors::stern_judging;
    constexpr auto ss = vectors::simple_standing;
    return {
        {sj, sj},
        {ss, ss},
        {ss, sj},
        {sj, ss},
        {sj, vectors::image_scoring},
        {sj, vectors::shunning},
        {ss, vectors::image_scoring},
        {ss, vectors::shunning},
    };
}

/// All 16 second-order norms ordered by the bit pattern F_G F_B N_G N_B read
/// as a binary number, 0000 first.
inline std::vector<SocialNorm> all_second_order()
{
    std::vector<SocialNorm> out;
    out.reserve(16);
    for (int code = 0; code < 16; ++code) {
        const NormVector v{(code >> 3) & 1, (code >> 2) & 1, (code >> 1) & 1, code & 1};
        out.push_back(second_order_norm(v));
    }
    return out;
}

// ---------------------------------------------------------------------------
// Bitstring form: "gggg/bbbb", or "gggg" for a second-order norm.

inline std::string to_string(const NormVector& v)
{
    std::string s;
    for (auto b : v.bits()) {
        s.push_back(b ? '1' : '0');
    }
    return s;
}

inline std::string to_string(const SocialNorm& norm)
{
    return to_string(norm.if_good) + "/" + to_string(norm.if_bad);
}

inline NormVector parse_norm_vector(std::string_view text)
{
    if (text.size() != 4) {
        throw std::invalid_argument("norm vector must have four bits, got '" + std::string(text) + "'");
    }
    std::array<int, 4> b{};
    for (std::size_t k = 0; k < 4; ++k) {
        if (text[k] != '0' && text[k] != '1') {
            throw std::invalid_argument("norm vector bits must be 0 or 1, got '" + std::string(text) + "'");
        }
        b[k] = text[k] - '0';
    }
    return {b[0], b[1], b[2], b[3]};
}

inline SocialNorm parse_norm(std::string_view text)
{
    const auto slash = text.find('/');
    if (slash == std::string_view::npos) {
        return second_order_norm(parse_norm_vector(text));
    }
    return {parse_norm_vector(text.substr(0, slash)), parse_norm_vector(text.substr(slash + 1))};
}

/// Accepts a named norm (full or abbreviated) or a bitstring.
inline SocialNorm norm_from_spec(std::string_view text)
{
    if (!text.empty() && (text[0] == '0' || text[0] == '1')) {
        return parse_norm(text);
    }
    return named_norm(text);
}

/// Abbreviation for the named norms, bitstring otherwise.
inline std::string norm_label(const SocialNorm& norm)
{
    if (auto a = norm_abbreviation(norm)) {
        return std::string(*a);
    }
    return to_string(norm);
}

} // namespace fairdg

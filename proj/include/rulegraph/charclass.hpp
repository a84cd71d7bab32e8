#pragma once

#include <array>
#include <bitset>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <string_view>

namespace rulegraph {

/// Byte set used for class membership and automaton labels.
using ByteSet = std::bitset<256>;

/// The fixed inventory of character classes, in preference order.
///
/// `first_covering` returns the earliest class in this order that contains a
/// given set of characters, so the order doubles as the join used when two
/// repeat classes are merged. Every class is the first cover of its own
/// members, which makes the join idempotent.
enum class CharClassId : std::uint8_t {
  kDigit,      // [0-9]
  kLower,      // [a-z]
  kUpper,      // [A-Z]
  kHex,        // [a-f0-9]
  kAlpha,      // [A-Za-z]
  kAlnum,      // [A-Za-z0-9]
  kWord,       // [A-Za-z0-9_-]
  kPath,       // [A-Za-z0-9_.:/-]
  kPrintable,  // [ -~]
};

inline constexpr std::size_t kCharClassCount = 9;

std::span<const CharClassId> all_char_classes();

const ByteSet& class_members(CharClassId id);
std::size_t class_size(CharClassId id);
bool class_contains(CharClassId id, unsigned char c);

/// Canonical bracket text, e.g. "[A-Za-z0-9]".
std::string_view class_bracket(CharClassId id);

/// Earliest class in inventory order containing every byte of `chars`.
/// Empty when some byte is outside printable ASCII.
std::optional<CharClassId> first_covering(const ByteSet& chars);

/// Inventory class whose member set equals `chars` exactly.
std::optional<CharClassId> class_from_members(const ByteSet& chars);

}  // namespace rulegraph

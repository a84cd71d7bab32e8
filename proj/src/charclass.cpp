#include "rulegraph/charclass.hpp"

namespace rulegraph {
namespace {

ByteSet range(char lo, char hi) {
  ByteSet s;
  for (int c = static_cast<unsigned char>(lo); c <= static_cast<unsigned char>(hi); ++c) s.set(c);
  return s;
}

ByteSet chars(std::string_view cs) {
  ByteSet s;
  for (char c : cs) s.set(static_cast<unsigned char>(c));
  return s;
}

struct Inventory {
  std::array<ByteSet, kCharClassCount> members;
  std::array<std::size_t, kCharClassCount> sizes;

  Inventory() {
    const ByteSet digit = range('0', '9');
    const ByteSet lower = range('a', 'z');
    const ByteSet upper = range('A', 'Z');
    members[0] = digit;
    members[1] = lower;
    members[2] = upper;
    members[3] = range('a', 'f') | digit;
    members[4] = lower | upper;
    members[5] = lower | upper | digit;
    members[6] = members[5] | chars("_-");
    members[7] = members[5] | chars("_.:/-");
    members[8] = range(' ', '~');
    for (std::size_t i = 0; i < kCharClassCount; ++i) sizes[i] = members[i].count();
  }
};

const Inventory& inventory() {
  static const Inventory inv;
  return inv;
}

constexpr std::array<CharClassId, kCharClassCount> kOrder = {
    CharClassId::kDigit, CharClassId::kLower, CharClassId::kUpper,
    CharClassId::kHex,   CharClassId::kAlpha, CharClassId::kAlnum,
    CharClassId::kWord,  CharClassId::kPath,  CharClassId::kPrintable,
};

constexpr std::array<std::string_view, kCharClassCount> kBrackets = {
    "[0-9]",       "[a-z]",          "[A-Z]",
    "[a-f0-9]",    "[A-Za-z]",       "[A-Za-z0-9]",
    "[A-Za-z0-9_-]", "[A-Za-z0-9_.:/-]", "[ -~]",
};

}  // namespace

std::span<const CharClassId> all_char_classes() { return kOrder; }

const ByteSet& class_members(CharClassId id) {
  return inventory().members[static_cast<std::size_t>(id)];
}

std::size_t class_size(CharClassId id) { return inventory().sizes[static_cast<std::size_t>(id)]; }

bool class_contains(CharClassId id, unsigned char c) { return class_members(id).test(c); }

std::string_view class_bracket(CharClassId id) { return kBrackets[static_cast<std::size_t>(id)]; }

std::optional<CharClassId> first_covering(const ByteSet& cs) {
  for (CharClassId id : kOrder) {
    if ((cs & ~class_members(id)).none()) return id;
  }
  return std::nullopt;
}

std::optional<CharClassId> class_from_members(const ByteSet& cs) {
  for (CharClassId id : kOrder) {
    if (cs == class_members(id)) return id;
  }
  return std::nullopt;
}

}  // namespace rulegraph

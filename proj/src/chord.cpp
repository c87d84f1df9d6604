#include "chordtm/chord.hpp"

#include <array>
#include <algorithm>

namespace chordtm {

namespace {

constexpr std::array<const char*, 12> kPitchNames = {
    "C", "C#", "D", "D#", "E", "F", "F#", "G", "G#", "A", "A#", "B"};

// Natural pitch classes for letters A..G.
constexpr std::array<int, 7> kLetterPc = {9, 11, 0, 2, 4, 5, 7};

constexpr std::array<std::string_view, 26> kKnownQualities = {
    "maj",  "min",   "dim",   "aug",   "maj7",    "min7",  "7",
    "dim7", "hdim7", "minmaj7", "maj6", "min6",   "6",     "9",
    "maj9", "min9",  "11",    "min11", "13",      "maj13", "min13",
    "sus2", "sus4",  "sus",   "5",     "1"};

bool shorthand_known(std::string_view q) {
  return std::find(kKnownQualities.begin(), kKnownQualities.end(), q) !=
         kKnownQualities.end();
}

bool shorthand_minor(std::string_view q) {
  return q.starts_with("min") || q.starts_with("dim") || q.starts_with("hdim");
}

// Degree-list classification: "(1,b3,5)" is minor, "(1,3,5)" major.
std::optional<bool> degrees_minor(std::string_view degrees) {
  std::size_t pos = 0;
  while (pos <= degrees.size()) {
    std::size_t comma = degrees.find(',', pos);
    std::string_view tok = degrees.substr(
        pos, comma == std::string_view::npos ? degrees.size() - pos : comma - pos);
    while (!tok.empty() && tok.front() == ' ') tok.remove_prefix(1);
    while (!tok.empty() && tok.back() == ' ') tok.remove_suffix(1);
    if (tok == "b3") return true;
    if (tok == "3") return false;
    if (comma == std::string_view::npos) break;
    pos = comma + 1;
  }
  return false;  // no third named: default major
}

}  // namespace

std::string ChordSymbol::name() const {
  if (is_no_chord()) return "N";
  std::string s = kPitchNames[root()];
  s += is_minor() ? ":min" : ":maj";
  return s;
}

std::optional<int> parse_pitch_class(std::string_view root) {
  if (root.empty() || root[0] < 'A' || root[0] > 'G') return std::nullopt;
  int pc = kLetterPc[root[0] - 'A'];
  for (char c : root.substr(1)) {
    if (c == '#')
      ++pc;
    else if (c == 'b')
      --pc;
    else
      return std::nullopt;
  }
  return ((pc % 12) + 12) % 12;
}

std::optional<ChordSymbol> reduce_chord(std::string_view label) {
  if (label == "N") return ChordSymbol::no_chord();
  if (label.empty() || label == "X") return std::nullopt;

  // Strip the bass note; it never changes the major/minor decision.
  if (std::size_t slash = label.find('/'); slash != std::string_view::npos)
    label = label.substr(0, slash);

  std::string_view root = label;
  std::string_view quality;
  if (std::size_t colon = label.find(':'); colon != std::string_view::npos) {
    root = label.substr(0, colon);
    quality = label.substr(colon + 1);
  }

  auto pc = parse_pitch_class(root);
  if (!pc) return std::nullopt;
  if (quality.empty())  // bare root: major triad
    return ChordSymbol::major(*pc);

  std::string_view shorthand = quality;
  std::string_view degrees;
  if (std::size_t paren = quality.find('('); paren != std::string_view::npos) {
    if (quality.back() != ')') return std::nullopt;
    shorthand = quality.substr(0, paren);
    degrees = quality.substr(paren + 1, quality.size() - paren - 2);
  }

  bool minor = false;
  if (shorthand.empty()) {
    auto m = degrees_minor(degrees);
    if (!m) return std::nullopt;
    minor = *m;
  } else {
    if (!shorthand_known(shorthand)) return std::nullopt;
    minor = shorthand_minor(shorthand);
  }
  return minor ? ChordSymbol::minor(*pc) : ChordSymbol::major(*pc);
}

}  // namespace chordtm

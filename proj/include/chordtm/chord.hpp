#pragma once

#include <compare>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>

namespace chordtm {

// One of 25 chord classes: 12 roots x {major, minor} plus a no-chord class.
// index = root * 2 + (0 for major, 1 for minor) with roots C=0 .. B=11;
// index 24 is the no-chord class.
class ChordSymbol {
 public:
  static constexpr int kNumClasses = 25;
  static constexpr int kNoChordIndex = 24;

  constexpr ChordSymbol() : index_(kNoChordIndex) {}
  constexpr explicit ChordSymbol(int index) : index_(index) {
    if (index < 0 || index >= kNumClasses)
      throw std::out_of_range("chord class index out of range");
  }

  static constexpr ChordSymbol no_chord() { return ChordSymbol(kNoChordIndex); }
  static constexpr ChordSymbol major(int pitch_class) {
    return ChordSymbol(pitch_class * 2);
  }
  static constexpr ChordSymbol minor(int pitch_class) {
    return ChordSymbol(pitch_class * 2 + 1);
  }

  constexpr int index() const { return index_; }
  constexpr bool is_no_chord() const { return index_ == kNoChordIndex; }
  constexpr int root() const { return is_no_chord() ? -1 : index_ / 2; }
  constexpr bool is_minor() const { return !is_no_chord() && index_ % 2 == 1; }

  // Canonical name: "C:maj", "F#:min", "N". reduce_chord() maps these back.
  std::string name() const;

  friend constexpr bool operator==(ChordSymbol, ChordSymbol) = default;
  friend constexpr auto operator<=>(ChordSymbol, ChordSymbol) = default;

 private:
  int index_;
};

// Root token ("C", "F#", "Db", "Gbb", ...) -> pitch class 0..11, enharmonics
// folded (Db == C#). nullopt if the token is not a root.
std::optional<int> parse_pitch_class(std::string_view root);

// Harte-style label -> 25-class symbol. Grammar: "N" | root[:quality][/bass].
// Quality is mapped to major or minor by its third: shorthands starting with
// min/dim/hdim are minor, everything else (incl. sus2/sus4 and bare roots) is
// major; a parenthesised degree list is minor iff it contains b3. The bass
// note is ignored. Returns nullopt for labels outside the grammar ("X",
// unknown roots or qualities); the caller decides whether to reject those or
// fold them into no-chord.
std::optional<ChordSymbol> reduce_chord(std::string_view label);

}  // namespace chordtm

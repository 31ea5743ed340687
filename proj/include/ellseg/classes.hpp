#pragma once

#include <cstdint>

namespace ellseg {

/// Visible-parts labeling.
namespace partseg {
inline constexpr std::uint8_t kBackground = 0;
inline constexpr std::uint8_t kSclera = 1;
inline constexpr std::uint8_t kIris = 2;
inline constexpr std::uint8_t kPupil = 3;
inline constexpr int kNumClasses = 4;
}  // namespace partseg

/// Full-ellipse labeling: pupil and iris painted regardless of occlusion.
namespace ellseg_classes {
inline constexpr std::uint8_t kBackground = 0;
inline constexpr std::uint8_t kIris = 1;
inline constexpr std::uint8_t kPupil = 2;
inline constexpr int kNumClasses = 3;
}  // namespace ellseg_classes

}  // namespace ellseg

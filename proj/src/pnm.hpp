#ifndef EKD_PNM_HPP
#define EKD_PNM_HPP

#include <string>

#include "field.hpp"

namespace ekd {

// Binary PGM (P5) and PPM (P6), 8-bit, maxval 255. Reading yields a 1- or
// 3-channel field; writing clamps to [0,255] and rounds half away from zero.
PixelField read_image(const std::string& path);
void write_image(const PixelField& field, const std::string& path);

}  // namespace ekd

#endif

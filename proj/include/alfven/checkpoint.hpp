#pragma once

#include <string>

#include "alfven/elsasser.hpp"

namespace alfven {

// Checkpoint layout: one JSON text header line
//   {"dims":[n1,n2,n3],"box":[L1,L2,L3],"time":t,"mu":mu,"b0":b0}
// terminated by '\n', followed by six flat little-endian binary64 arrays
// in x1-fastest order: z+1 z+2 z+3 z-1 z-2 z-3.
void write_checkpoint(const std::string& path, const ElsasserState& s);
ElsasserState read_checkpoint(const std::string& path);

}  // namespace alfven

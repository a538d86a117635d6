#include "alfven/checkpoint.hpp"

#include <bit>
#include <fstream>

#include "json.hpp"

namespace alfven {

static_assert(std::endian::native == std::endian::little,
              "checkpoint writer assumes a little-endian host");

void write_checkpoint(const std::string& path, const ElsasserState& s) {
  const Grid3& g = s.grid();
  nlohmann::json header;
  header["dims"] = {g.n(0), g.n(1), g.n(2)};
  header["box"] = {g.length(0), g.length(1), g.length(2)};
  header["time"] = s.t;
  header["mu"] = s.mu;
  header["b0"] = s.b0;

  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error("cannot open checkpoint for writing: " + path);
  out << header.dump() << "\n";
  for (const SpectralVector3* z : {&s.zp, &s.zm}) {
    VectorField3 phys = to_physical(*z);
    for (int c = 0; c < 3; ++c)
      out.write(reinterpret_cast<const char*>(phys[c].data()),
                static_cast<std::streamsize>(sizeof(double) * g.size()));
  }
  if (!out) throw Error("failed writing checkpoint: " + path);
}

ElsasserState read_checkpoint(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error("cannot open checkpoint: " + path);
  std::string line;
  if (!std::getline(in, line)) throw Error("checkpoint missing header: " + path);
  nlohmann::json header = nlohmann::json::parse(line);
  Grid3 g({header["dims"][0], header["dims"][1], header["dims"][2]},
          {header["box"][0], header["box"][1], header["box"][2]});
  ElsasserState s(g, header["mu"], header["b0"]);
  s.t = header["time"];
  VectorField3 phys(g);
  auto read_side = [&](SpectralVector3& z) {
    for (int c = 0; c < 3; ++c) {
      in.read(reinterpret_cast<char*>(phys[c].data()),
              static_cast<std::streamsize>(sizeof(double) * g.size()));
      if (!in) throw Error("truncated checkpoint: " + path);
    }
    z = to_spectral(phys);
  };
  read_side(s.zp);
  read_side(s.zm);
  return s;
}

}  // namespace alfven

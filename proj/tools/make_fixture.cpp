// Writes a synthetic paired dataset (real/, fake/<method>/, landmarks/).
#include <cstdio>
#include <exception>
#include <string>

#include "CLI11.hpp"
#include "fftg/synthetic.hpp"

int main(int argc, char** argv) {
  CLI::App app{"Generate a synthetic face-pair dataset"};
  std::string root;
  int count = 20;
  std::uint64_t seed = 7;
  int size = 128;
  app.add_option("root", root, "Output dataset directory")->required();
  app.add_option("--count", count, "Number of pairs")->check(CLI::PositiveNumber);
  app.add_option("--seed", seed, "Generator seed");
  app.add_option("--size", size, "Square frame size in pixels")->check(CLI::Range(64, 1024));
  CLI11_PARSE(app, argc, argv);

  try {
    for (int i = 0; i < count; ++i) {
      // Every seventh pair is left unedited.
      const int edited = i % 7 == 0 ? 0 : -1;
      const auto pair = fftg::synthetic::make_pair(seed * 1000003ull + static_cast<std::uint64_t>(i), size, size, edited);
      char id[32];
      std::snprintf(id, sizeof id, "p%03d_f%03d", i / 3, 10 * (i % 3));
      fftg::synthetic::write_pair(root, i % 2 == 0 ? "swap" : "reenact", id, pair);
    }
  } catch (const std::exception& e) {
    std::fprintf(stderr, "make_fixture: %s\n", e.what());
    return 1;
  }
  return 0;
}

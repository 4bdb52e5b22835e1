// Regenerates the JSON rulebase files from the in-code builders so the
// shipped data directory can never drift silently from the library.
#include <filesystem>
#include <fstream>
#include <iostream>

#include "fearbrake/fear.hpp"
#include "fearbrake/fuzzy.hpp"

int main(int argc, char** argv) {
  namespace fs = std::filesystem;
  using namespace fearbrake;
  const fs::path out_dir = argc > 1 ? argv[1] : "data/rulebases";
  fs::create_directories(out_dir);
  const auto dump = [&](const std::string& name, const fuzzy::FisSpec& fis) {
    std::ofstream out(out_dir / (name + ".json"), std::ios::binary);
    out << fuzzy::fis_to_json(fis) << "\n";
    std::cout << "wrote " << (out_dir / (name + ".json")).string() << "\n";
  };
  dump("undesirability_amended", occ::make_undesirability_fis(true));
  dump("undesirability_printed", occ::make_undesirability_fis(false));
  dump("likelihood", occ::make_likelihood_fis());
  dump("global_intensity", occ::make_global_intensity_fis());
  return 0;
}

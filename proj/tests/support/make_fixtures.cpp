// Writes a synthetic world's resources and corpora into a directory.
//
//   sact_make_fixtures <dir> [seed] [per_class]

#include <cstdlib>
#include <iostream>
#include <string>

#include "sact/corpus_io.hpp"
#include "sact/hash.hpp"
#include "synthetic.hpp"

int main(int argc, char** argv) {
  if (argc < 2) {
    std::cerr << "usage: sact_make_fixtures <dir> [seed] [per_class]\n";
    return 2;
  }
  const std::filesystem::path dir = argv[1];
  const std::uint64_t seed = argc > 2 ? std::strtoull(argv[2], nullptr, 10) : 1;
  const int per_class = argc > 3 ? std::atoi(argv[3]) : 200;
  try {
    const sact::testing::SyntheticWorld world(seed);
    world.write_resources(dir);
    const auto put = [&](const char* name, const sact::LabeledCorpus& corpus) {
      sact::write_file_atomic(dir / name, sact::format_corpus(corpus));
    };
    put("sa_corpus.tsv", world.sa_corpus(per_class, false, seed + 1));
    put("synonym_corpus.tsv", world.sa_corpus(per_class, true, seed + 2));
    put("veracity_corpus.tsv", world.veracity_corpus(30, seed + 3));
    put("rumor_corpus.tsv", world.sa_rumor_corpus(60, seed + 4));
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 0;
}

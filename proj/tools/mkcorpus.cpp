// Regenerates the shipped corpus tables and the puzzle rule file from the
// programmatic builders. Fixture .csp files are authored by hand.
#include <iostream>

#include "rulesmith/corpus.hpp"

using namespace rulesmith;

int main(int argc, char** argv) {
    std::string dir = argc > 1 ? argv[1] : corpus_dir();
    try {
        for (const auto& info : corpus_catalog()) {
            ConstraintTable t = build_table(info.name);
            write_file(dir + "/" + info.name + ".ct", write_table(t));
            std::cerr << info.name << ": " << t.tuples.size() << " tuples\n";
        }
        ConstraintTable puzzle = build_puzzle_universal();
        write_file(dir + "/puzzle.rules", to_text(build_puzzle_rules(puzzle)));
        std::cerr << "puzzle.rules written\n";
    } catch (const Error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    }
    return 0;
}

#pragma once

// Shared driver for the bundled SUT executables: `<sut> [--kindmap K] IN OUT`
// reads a model file, transforms it, and writes the result.

#include "conman/demo_bindings.hpp"
#include "conman/dsl.hpp"

#include <CLI11.hpp>

#include <fstream>
#include <iostream>
#include <sstream>

inline int sut_main(int argc, char** argv,
                    conman::demo::DemoModel (*transform)(const conman::demo::DemoModel&, const conman::demo::KindMap&))
{
    CLI::App app{"Demo transformation under test"};
    std::string in, out, kindmap = "identity";
    app.add_option("in", in, "Input model file")->required();
    app.add_option("out", out, "Output model file")->required();
    app.add_option("--kindmap", kindmap, "identity, shift or multi");
    CLI11_PARSE(app, argc, argv);
    try {
        std::ifstream f(in, std::ios::binary);
        if (!f)
            throw conman::Error("cannot read '" + in + "'");
        std::ostringstream text;
        text << f.rdbuf();
        const auto model = conman::dsl::read_model_file(text.str(), in);
        auto produced = transform(model, conman::demo::KindMap::named(kindmap));
        std::ofstream o(out, std::ios::binary);
        if (!o)
            throw conman::Error("cannot write '" + out + "'");
        o << conman::dsl::write_model_file(produced, "output");
        return 0;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    }
}

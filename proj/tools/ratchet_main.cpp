#include <exception>
#include <iostream>

#include "ratchet/config.hpp"
#include "ratchet/errors.hpp"
#include "ratchet/runner.hpp"

int main(int argc, char** argv) {
    using namespace ratchet;
    try {
        const auto config = parse_config(argc, argv);
        if (!config) return exit_ok;  // --help
        return run_command(*config);
    } catch (const usage_error& e) {
        std::cerr << "usage error: " << e.what() << "\n";
        return exit_usage;
    } catch (const numerical_error& e) {
        std::cerr << "numerical failure: " << e.what() << "\n";
        return exit_numerical;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return exit_usage;
    }
}

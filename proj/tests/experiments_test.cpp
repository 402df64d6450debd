#include <catch2/catch_amalgamated.hpp>
#include "anarchy/experiments.hpp"

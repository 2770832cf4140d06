#include <gtest/gtest.h>

#include "zonerec/zonerec.hpp"

TEST(Smoke, Compiles) { SUCCEED(); }

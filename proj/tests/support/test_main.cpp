#include <gtest/gtest.h>

#include "wordmap/diagnostics.hpp"

int main(int argc, char** argv) {
    ::testing::InitGoogleTest(&argc, argv);
    wordmap::set_warning_handler(nullptr);
    return RUN_ALL_TESTS();
}

#include "../vendor/doctest.h"

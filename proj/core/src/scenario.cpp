#include "ucat/scenario.hpp"

#pragma once

#define CFORGE_VERSION "0.1.0"

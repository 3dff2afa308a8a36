
"""
    libs
    ~~~~
"""

# <dimples> codec helpers (json_encode / json_decode, utf8_*) need their
# coders registered before first use
from dimples.common.compat import LibraryLoader

LibraryLoader().run()

"""Engine-wide tuning constants.

Everything here is a deliberate default, not a law of the engine: the
per-entity values are copied onto entities at spawn time so cells can
hot-swap them while the game runs.
"""

# Simulation step. One tick advances game time by exactly this much.
TICK_DT = 1.0 / 60.0

# Movement / combat defaults.
DEFAULT_PLAYER_SPEED = 120.0   # px/s per axis; diagonals normalized
DEFAULT_ENEMY_SPEED = 90.0     # px/s, slower than the player by default
DEFAULT_HEALTH = 100.0
PROJECTILE_DAMAGE = 10.0
PROJECTILE_SPEED = 240.0       # px/s
PROJECTILE_SIZE = 4.0          # square AABB side, px

# Fallback AABB side when an entity has no sprite rect to size from.
DEFAULT_ENTITY_SIZE = 16.0

# Default enemy brain: re-path cadence and fire control. The fire
# values are also written into enemy.custom at spawn so they can be
# tweaked live per enemy.
ENEMY_REPATH_INTERVAL = 30     # ticks between forced A* recomputes
ENEMY_FIRE_INTERVAL = 60       # ticks between shots
ENEMY_FIRE_RANGE = 300.0       # px, center-to-center, needs line of sight

DEFAULT_TILE_SIZE = 32         # px per map tile

# NoteScript evaluator guard rail.
RECURSION_LIMIT = 256

# serve mode only; replays emit no snapshots.
SNAPSHOT_MAX_PER_SECOND = 30

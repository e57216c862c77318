"""Reference scenario: one gNB, up to 150 UEs in a 100 m cell, URLLC on/off sources."""

N_UES_MAX = 150
CELL_RADIUS_M = 100.0
GNB_POSITION = (0.0, 0.0, 30.0)
UE_HEIGHT_M = 1.5

# 30 kHz SCS with 2-symbol scheduling granularity, 100 MHz carrier.
SLOT_LEN_US = 500
BANDWIDTH_MHZ = 100
N_RB = 100

ON_TIME_US = 10_000
OFF_TIME_US = 90_000
DATA_RATE_BPS = 1_000_000
PACKET_BITS = 1002

UL_GRANT_DELAY_US = (250, 1000)
GNB_PROC_DELAY_US = (1000, 2000)
CORE_DELAY_US = (5000, 10000)

DEADLINE_US = 5000
RELIABILITY_TARGET = 0.99999

DURATION_MS = 10_000

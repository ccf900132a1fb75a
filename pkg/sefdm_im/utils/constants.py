# SPDX-License-Identifier: BSD-3-Clause
# For full license text, see the LICENSE file in the repo root
# or https://opensource.org/licenses/BSD-3-Clause

# Column names used in the emitted CSV files
# Single source of truth


class Constants:
    """
    Constants for sefdm_im
    """

    EBN0_DB = "ebn0_db"
    INDEX_BER = "index_ber"
    DATA_BER = "data_ber"
    AVG_BER = "avg_ber"
    BITS_COUNTED = "bits_counted"
    CI_HALF_WIDTH = "ci_half_width"
    MAX_BITS_HIT = "max_bits_hit"
    GAMMA_DB = "gamma_db"
    CCDF = "ccdf"
    SCHEME = "scheme"
    SE = "se"
    THETA = "theta"
    THETA_RAW = "theta_raw"
    ICI_INTRA_DB = "ici_intra_db"
    ICI_INTER_DB = "ici_inter_db"
    CONFIG_PREFIX = "# config: "

    # Counter-based generator recorded in every output header
    RNG_NAME = "numpy.random.Philox"

    LLR_CLIP = 50.0

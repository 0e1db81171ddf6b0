"""
A Table 2 style run over several valuation dates
================================================

``batch`` recalibrates on each date from the preceding 30 observations and
reports the option value as a share of the quoted futures price. The data
are synthetic, so the numbers only illustrate the pipeline. The repeated
date is deliberate: duplicate valuation dates are valued, not dropped.
"""

from quality_option import cli, data

cli.main([
    "batch",
    "--prices", str(data.path(data.CASH)),
    "--futures", str(data.path(data.FUTURES)),
    "--par", "DELHI", "--alt", "BIKANER:70", "--alt", "INDORE:19",
    "--rate", "0.075", "--expiry", "2014-08-20",
    "--dates", "2014-06-02,2014-06-03,2014-06-03,2014-06-04,2014-06-05",
])

# SPDX-License-Identifier: BSD-3-Clause
# For full license text, see the LICENSE file in the repo root
# or https://opensource.org/licenses/BSD-3-Clause

from setuptools import find_packages, setup

with open("requirements.txt") as f:
    requirements = [line for line in f.read().splitlines() if line and not line.startswith("#")]

setup(
    name="sefdm-im-sim",
    version="0.3.1",
    description="Simulation of spectrally efficient FDM with index modulation: "
    "activation pattern designs, coded LLR detection, BER and PAPR sweeps.",
    long_description=open("README.md", "r", encoding="utf-8").read(),
    long_description_content_type="text/markdown",
    license="BSD-3-Clause",
    packages=find_packages(exclude=["tests", "tests.*"]),
    package_data={
        "sefdm_im": [
            "simulation/run_configs/default_configs.yaml",
            "simulation/run_configs/presets.yaml",
        ],
    },
    include_package_data=True,
    install_requires=requirements,
    entry_points={
        "console_scripts": [
            "sefdm-im=sefdm_im.simulation.simulation_script:main",
        ],
    },
    classifiers=[
        "Programming Language :: Python :: 3",
        "License :: OSI Approved :: BSD License",
        "Operating System :: OS Independent",
        "Topic :: Scientific/Engineering",
    ],
    python_requires=">=3.9.0",
)

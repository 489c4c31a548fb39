import os
from setuptools import setup

version_py = os.path.join(os.path.dirname(__file__), 'sldiff', 'version.py')
version = open(version_py).read().strip().split(
    '=')[-1].replace('"', '').strip()
long_description = """
``sldiff`` scores and evaluates diffusion-based recommendation (mass diffusion,
heat conduction, their hybrid and semi-local diffusion) on sparse user-object networks
"""

HERE = os.path.dirname(__file__)

with open(os.path.join(HERE, "requirements.txt"), "r") as f:
    install_requires = [x.strip() for x in f.readlines()]

setup(
    name="sldiff",
    version=version,
    install_requires=install_requires,
    python_requires='>=3.11',
    packages=['sldiff'],
    description='Semi-local diffusion recommendation on sparse bipartite networks',
    long_description=long_description,
    package_dir={'sldiff': "sldiff"},
    package_data={'sldiff': []},
    zip_safe=False,
    include_package_data=True,
    entry_points={
        'console_scripts': [
            'sldiff=sldiff.pipeline:main',
        ],
    },
    classifiers=[
        'Development Status :: 4 - Beta',
        'Intended Audience :: Science/Research',
        'License :: OSI Approved :: MIT License',
        'Topic :: Scientific/Engineering :: Information Analysis'
    ]
)

from setuptools import setup, find_packages

setup(name='History-Check',
      version='0.1',
      description='Desk-scale simulation of verifiable delegated quantum computation: '
                  'history states, clock Hamiltonians, Pauli-sampled energy tests '
                  'and Monte-Carlo completeness/soundness campaigns.',
      license='MIT',
      install_requires=[
            'numpy',
            'scipy>=1.7',   # binomtest / proportion_ci
            'pandas>=1.5',
      ],
      extras_require={
            'test': ['pytest'],
      },
      packages=find_packages(),
      py_modules=['main'],
      entry_points={
            'console_scripts': ['history-check=main:main'],
      },
      classifiers=[
            'License :: OSI Approved :: MIT License',
            'Development Status :: 2 - Pre-Alpha',
            'Intended Audience :: Science/Research',
            'Programming Language :: Python :: 3.7',
            'Topic :: Scientific/Engineering :: Physics',
      ],
      python_requires='>=3.7',
      include_package_data=True,
      zip_safe=False)

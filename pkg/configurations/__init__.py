# this file is only here because setuptools needs it when packaging configs inside applications :)

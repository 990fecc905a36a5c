function l(l,n,u){var i=null,t;return function a(){var r=this;t=arguments;var f=u&&i===null;if(i!==null){clearTimeout(i)}i=setTimeout(function n(){i=null;if(!u){l.apply(r,t)}},n);if(f){l.apply(r,t)}}}
